#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "kpb/errors.hpp"
#include "kpb/field.hpp"

namespace kpb {

// Snapshot format: one header line `KPBFIELD v1 nx ny Lx Ly`, then nx*ny
// little-endian 64-bit floats, row-major, x index outer.

inline void write_field(const Field& f, const std::string& path) {
    const auto& g = *f.grid();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MissingInput("write_field: cannot open " + path);
    std::ostringstream head;
    head.precision(17);
    head << "KPBFIELD v1 " << g.nx << " " << g.ny << " " << g.Lx << " " << g.Ly << "\n";
    out << head.str();
    static_assert(sizeof(double) == 8);
    out.write(reinterpret_cast<const char*>(f.physical().data()),
              static_cast<std::streamsize>(f.physical().size() * sizeof(double)));
    if (!out) throw MissingInput("write_field: short write to " + path);
}

inline Field read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingInput("read_field: cannot open " + path);
    std::string header;
    std::getline(in, header);
    std::istringstream hs(header);
    std::string magic, ver;
    int nx = 0, ny = 0;
    double Lx = 0.0, Ly = 0.0;
    hs >> magic >> ver >> nx >> ny >> Lx >> Ly;
    if (magic != "KPBFIELD" || ver != "v1" || !hs)
        throw MissingInput("read_field: bad header in " + path);
    std::vector<double> phys(static_cast<std::size_t>(nx) * ny);
    in.read(reinterpret_cast<char*>(phys.data()),
            static_cast<std::streamsize>(phys.size() * sizeof(double)));
    if (!in) throw MissingInput("read_field: truncated payload in " + path);
    return Field::from_physical(make_grid(nx, ny, Lx, Ly), std::move(phys));
}

}  // namespace kpb
