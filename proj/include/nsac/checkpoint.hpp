#pragma once

// Binary checkpoints: "NSAC" magic, u32 format version, header, then each
// field's samples as little-endian binary64, row-major, in declared order
// (varrho, u_1..u_d, chi) or (rho, m_1..m_d, rho*chi). Round trips are
// bit-exact, which is what makes restart determinism possible at all.

#include <cstdint>
#include <cstring>
#include <fstream>

#include "nsac/model.hpp"

namespace nsac {

namespace ckpt {

constexpr char kMagic[4] = {'N', 'S', 'A', 'C'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_raw(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_raw(std::istream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw FormatError("checkpoint truncated");
}

} // namespace ckpt

inline void save_checkpoint(const State& s, const ModelParams& p, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Io("cannot open checkpoint for writing: " + path);
    const Grid& g = *s.grid();
    os.write(ckpt::kMagic, 4);
    ckpt::write_raw(os, ckpt::kVersion);
    ckpt::write_raw(os, static_cast<std::uint32_t>(s.formulation == Formulation::Conservative));
    ckpt::write_raw(os, static_cast<std::uint32_t>(g.dim()));
    for (int a = 0; a < g.dim(); ++a) ckpt::write_raw(os, static_cast<std::uint32_t>(g.size(a)));
    for (int a = 0; a < g.dim(); ++a) ckpt::write_raw(os, g.length(a));
    ckpt::write_raw(os, s.time);
    const double model[7] = {p.mu, p.lambda, p.gamma, p.ell, p.pressure_scale,
                             p.vacuum_floor, p.smallness_delta};
    os.write(reinterpret_cast<const char*>(model), sizeof(model));
    auto dump = [&](const RealField& f) {
        os.write(reinterpret_cast<const char*>(f.data.data()),
                 static_cast<std::streamsize>(f.data.size() * sizeof(double)));
    };
    dump(s.rho);
    for (int a = 0; a < g.dim(); ++a) dump(s.mom[a]);
    dump(s.chi);
    if (!os) throw Io("short write on checkpoint " + path);
}

struct LoadedCheckpoint {
    State state;
    ModelParams model;
};

inline LoadedCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Io("cannot open checkpoint " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, ckpt::kMagic, 4) != 0)
        throw FormatError("bad checkpoint magic in " + path);
    std::uint32_t version, form, dim;
    ckpt::read_raw(is, version);
    if (version != ckpt::kVersion)
        throw FormatError("unsupported checkpoint version " + std::to_string(version));
    ckpt::read_raw(is, form);
    ckpt::read_raw(is, dim);
    if (dim < 1 || dim > 3) throw FormatError("checkpoint dim out of range");
    std::vector<int> sizes(dim);
    std::vector<double> lengths(dim);
    for (auto& n : sizes) {
        std::uint32_t v;
        ckpt::read_raw(is, v);
        n = static_cast<int>(v);
    }
    for (auto& l : lengths) ckpt::read_raw(is, l);
    double time;
    ckpt::read_raw(is, time);
    double model[7];
    for (double& m : model) ckpt::read_raw(is, m);

    GridPtr g;
    try {
        g = make_grid(static_cast<int>(dim), sizes, lengths);
    } catch (const InvalidGrid& e) {
        throw FormatError(std::string("checkpoint header invalid: ") + e.what());
    }
    LoadedCheckpoint out{State(form ? Formulation::Conservative : Formulation::Perturbation, g,
                               time),
                         ModelParams{}};
    out.model.mu = model[0];
    out.model.lambda = model[1];
    out.model.gamma = model[2];
    out.model.ell = model[3];
    out.model.pressure_scale = model[4];
    out.model.vacuum_floor = model[5];
    out.model.smallness_delta = model[6];

    auto slurp = [&](RealField& f) {
        is.read(reinterpret_cast<char*>(f.data.data()),
                static_cast<std::streamsize>(f.data.size() * sizeof(double)));
        if (!is) throw FormatError("checkpoint payload shorter than the header declares");
    };
    slurp(out.state.rho);
    for (std::uint32_t a = 0; a < dim; ++a) slurp(out.state.mom[a]);
    slurp(out.state.chi);
    is.peek();
    if (!is.eof()) throw FormatError("checkpoint payload longer than the header declares");
    return out;
}

} // namespace nsac
