#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "casolyte/curved.hpp"
#include "casolyte/dielectric.hpp"

namespace casolyte {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    return out;
}

double parse_field(const std::string& s, const std::string& origin, size_t lineno) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ValidationError(origin + " line " + std::to_string(lineno) + ": bad number '" + s +
                              "'");
    }
}

} // namespace

TabulatedUniversalFunction TabulatedUniversalFunction::from_csv_text(const std::string& text,
                                                                     const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    bool header_seen = false;
    TabulatedUniversalFunction table;
    std::map<double, std::vector<std::pair<double, double>>> groups; // u -> (x, value)

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        const auto fields = split_csv_line(line);
        if (!header_seen) {
            if (fields.size() == 3 && fields[0] == "x" && fields[1] == "u" && fields[2] == "f")
                table.has_u_ = true;
            else if (fields.size() == 2 && fields[0] == "x" && fields[1] == "phi")
                table.has_u_ = false;
            else
                throw ValidationError(origin + ": header must be 'x,u,f' or 'x,phi'");
            header_seen = true;
            continue;
        }
        const size_t want = table.has_u_ ? 3 : 2;
        if (fields.size() != want)
            throw ValidationError(origin + " line " + std::to_string(lineno) + ": expected " +
                                  std::to_string(want) + " columns");
        const double x = parse_field(fields[0], origin, lineno);
        if (!(x > 0.0))
            throw ValidationError(origin + " line " + std::to_string(lineno) + ": x must be > 0");
        const double u = table.has_u_ ? parse_field(fields[1], origin, lineno) : 0.0;
        if (table.has_u_ && !(u > 0.0 && u <= 0.25))
            throw ValidationError(origin + " line " + std::to_string(lineno) +
                                  ": u must lie in (0, 1/4]");
        const double v = parse_field(fields[table.has_u_ ? 2 : 1], origin, lineno);
        groups[u].push_back({x, v});
        ++table.rows_;
    }
    if (!header_seen || table.rows_ == 0)
        throw ValidationError(origin + ": empty table");
    for (auto& [u, pts] : groups) {
        std::sort(pts.begin(), pts.end());
        Branch br;
        br.u = u;
        for (size_t i = 0; i < pts.size(); ++i) {
            if (i > 0 && pts[i].first == pts[i - 1].first)
                throw ValidationError(origin + ": duplicate x = " + std::to_string(pts[i].first) +
                                      " for the same aspect ratio");
            br.logx.push_back(std::log(pts[i].first));
            br.value.push_back(pts[i].second);
        }
        if (br.logx.size() < 2)
            throw ValidationError(origin + ": need at least two x points per aspect ratio");
        table.branches_.push_back(std::move(br));
    }
    return table;
}

TabulatedUniversalFunction TabulatedUniversalFunction::from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("table file '" + path + "': cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_csv_text(ss.str(), "table file '" + path + "'");
}

double TabulatedUniversalFunction::evaluate(double x, double u) const {
    if (!(x > 0.0))
        throw std::domain_error("tabulated function: x must be > 0");
    const Branch* best = nullptr;
    if (has_u_) {
        double dist = 0.02; // no silent extrapolation across aspect families
        for (const auto& br : branches_) {
            const double d = std::abs(br.u - u);
            if (d <= dist) {
                dist = d;
                best = &br;
            }
        }
        if (!best)
            throw std::domain_error("tabulated function: no aspect family within 0.02 of u");
    } else {
        best = &branches_.front();
    }
    const double lx = std::log(x);
    if (lx < best->logx.front() || lx > best->logx.back())
        throw std::domain_error("tabulated function: x outside the tabulated range");
    const auto it = std::upper_bound(best->logx.begin(), best->logx.end(), lx);
    const size_t hi = std::min<size_t>(it - best->logx.begin(), best->logx.size() - 1);
    const size_t lo = hi - 1;
    const double w = (lx - best->logx[lo]) / (best->logx[hi] - best->logx[lo]);
    return (1.0 - w) * best->value[lo] + w * best->value[hi];
}

} // namespace casolyte
