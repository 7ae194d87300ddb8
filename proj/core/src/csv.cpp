#include "contagion/csv.hpp"

#include <cstdio>

namespace contagion {

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

void write_events_csv(std::ostream& out, const EventHistory& history) {
    out << "time,kind,mark_y,mark_z1,mark_z2,generation\n";
    for (const auto& e : history.events)
        out << num(e.time) << ',' << to_string(e.kind) << ',' << num(e.mark_y) << ','
            << num(e.mark_z1) << ',' << num(e.mark_z2) << ',' << e.generation << '\n';
}

void write_intensity_csv(std::ostream& out, const EventHistory& history,
                         const ModelParams& params, std::span<const double> times) {
    out << "t,lambda1,lambda2\n";
    IntensityCursor cursor(history, params);
    for (double t : times) {
        const Intensity v = cursor.at(t);
        out << num(t) << ',' << num(v[0]) << ',' << num(v[1]) << '\n';
    }
}

void write_laplace_grid_csv(std::ostream& out, const LaplaceGrid& grid) {
    const std::size_t m = grid.system_size();
    out << 't';
    for (std::size_t i = 1; i <= m; ++i) out << ",l_" << i;
    out << ",c\n";
    for (std::size_t j = 0; j < grid.grid().size(); ++j) {
        out << num(grid.grid()[j]);
        for (std::size_t i = 1; i <= m; ++i) out << ',' << num(grid.l(i)[j]);
        out << ',' << num(grid.c()[j]) << '\n';
    }
}

}  // namespace contagion
