#include "cubicw/grids.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cubicw {

namespace {

double parse_double(const std::string& tok, const std::string& ctx) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("grid '" + ctx + "': cannot parse '" + tok + "'");
    }
    if (pos != tok.size()) throw std::invalid_argument("grid '" + ctx + "': trailing characters in '" + tok + "'");
    return v;
}

std::vector<std::string> split_colon(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ':')) out.push_back(tok);
    return out;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
    const auto toks = split_colon(spec);
    if (toks.size() == 1) return {parse_double(toks[0], spec)};
    if (toks.size() != 3) throw std::invalid_argument("grid '" + spec + "': want 'v' or 'start:stop:step' or 'start:stop:xF'");
    const double start = parse_double(toks[0], spec);
    const double stop = parse_double(toks[1], spec);
    if (stop < start) throw std::invalid_argument("grid '" + spec + "': stop < start");
    std::vector<double> out;
    if (!toks[2].empty() && (toks[2][0] == 'x' || toks[2][0] == 'X')) {
        const double factor = parse_double(toks[2].substr(1), spec);
        if (!(factor > 1.0)) throw std::invalid_argument("grid '" + spec + "': geometric factor must be > 1");
        if (!(start > 0.0)) throw std::invalid_argument("grid '" + spec + "': geometric grid needs start > 0");
        for (double v = start; v <= stop * (1.0 + 1e-12); v *= factor) out.push_back(std::min(v, stop));
    } else {
        const double step = parse_double(toks[2], spec);
        if (!(step > 0.0)) throw std::invalid_argument("grid '" + spec + "': step must be > 0");
        const long count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (long i = 0; i < count; ++i) out.push_back(start + step * static_cast<double>(i));
    }
    if (out.empty()) throw std::invalid_argument("grid '" + spec + "': empty");
    return out;
}

std::vector<long> parse_n_grid(const std::string& spec) {
    std::vector<long> out;
    long prev = 0;
    for (double v : parse_grid(spec)) {
        const long n = std::lround(v);
        if (n < 1) throw std::invalid_argument("n grid '" + spec + "': entries must be >= 1");
        if (n <= prev) throw std::invalid_argument("n grid '" + spec + "': entries must be strictly increasing");
        out.push_back(n);
        prev = n;
    }
    return out;
}

std::string format_grid(const std::vector<double>& grid) {
    std::ostringstream os;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i) os << ",";
        os << grid[i];
    }
    return os.str();
}

}  // namespace cubicw
