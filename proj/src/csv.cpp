#include "varharm/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace varharm {

void write_csv(std::ostream& os, const GridFunction& f) {
    const Grid& g = f.grid();
    char buf[64];
    os << "n,L,N\n";
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%d\n", g.dim(), g.half_width(),
                  g.points_per_axis());
    os << buf;
    for (double v : f.values()) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", v);
        os << buf;
    }
}

void write_csv(const std::string& path, const GridFunction& f) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_csv(os, f);
}

GridFunction read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("csv: empty input");
    // Accept either a literal "n,L,N" title row followed by the metadata,
    // or the metadata directly on the first row.
    if (line.find_first_not_of("nLN, \r") == std::string::npos) {
        if (!std::getline(is, line)) throw std::runtime_error("csv: missing metadata row");
    }
    int n = 0, N = 0;
    double L = 0.0;
    {
        std::istringstream ss(line);
        char c1, c2;
        if (!(ss >> n >> c1 >> L >> c2 >> N) || c1 != ',' || c2 != ',')
            throw std::runtime_error("csv: bad metadata row: " + line);
    }
    Grid g(n, L, N);
    std::vector<double> values;
    values.reserve(g.size());
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        values.push_back(std::stod(line));
    }
    return GridFunction(g, std::move(values));
}

GridFunction read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    return read_csv(is);
}

}  // namespace varharm
