// field_io.cpp - CH6F reader/writer
#include "ch6/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include "ch6/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "CH6F writer assumes a little-endian host");

namespace ch6 {

namespace {

constexpr char kMagic[4] = {'C', 'H', '6', 'F'};
constexpr std::uint32_t kVersion = 1;

struct Header {
    std::uint32_t version = kVersion;
    std::uint32_t kind = 0;
    std::uint32_t dim = 0;
    std::vector<std::uint32_t> modes;
    std::vector<double> lengths;
};

void write_raw(const std::string& path, const Header& h, std::span<const double> payload) {
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(kMagic, 4);
        auto put32 = [&out](std::uint32_t v) {
            out.write(reinterpret_cast<const char*>(&v), sizeof v);
        };
        put32(h.version);
        put32(h.kind);
        put32(h.dim);
        for (std::uint32_t mcount : h.modes)
            put32(mcount);
        out.write(reinterpret_cast<const char*>(h.lengths.data()),
                  static_cast<std::streamsize>(h.lengths.size() * sizeof(double)));
        out.write(reinterpret_cast<const char*>(payload.data()),
                  static_cast<std::streamsize>(payload.size() * sizeof(double)));
        if (!out)
            throw IoError("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

Header make_header(const Grid& grid, FieldFileKind kind) {
    Header h;
    h.kind = static_cast<std::uint32_t>(kind);
    h.dim = static_cast<std::uint32_t>(grid.dim());
    for (int a = 0; a < grid.dim(); ++a) {
        h.modes.push_back(static_cast<std::uint32_t>(grid.modes(a)));
        h.lengths.push_back(grid.length(a));
    }
    return h;
}

struct Loaded {
    Header header;
    Grid grid;
    std::vector<double> payload;
};

Loaded read_raw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError(path + ": not a CH6F field file (bad magic)");

    auto get32 = [&in, &path]() {
        std::uint32_t v = 0;
        in.read(reinterpret_cast<char*>(&v), sizeof v);
        if (!in)
            throw IoError(path + ": truncated header");
        return v;
    };
    Loaded l;
    l.header.version = get32();
    if (l.header.version != kVersion)
        throw IoError(path + ": unknown CH6F version " + std::to_string(l.header.version));
    l.header.kind = get32();
    if (l.header.kind > 1)
        throw IoError(path + ": unknown field kind flag");
    l.header.dim = get32();
    if (l.header.dim < 1 || l.header.dim > 3)
        throw IoError(path + ": bad dimension");

    std::size_t count = 1;
    std::vector<int> modes;
    for (std::uint32_t a = 0; a < l.header.dim; ++a) {
        const std::uint32_t mcount = get32();
        l.header.modes.push_back(mcount);
        modes.push_back(static_cast<int>(mcount));
        count *= mcount;
    }
    l.header.lengths.resize(l.header.dim);
    in.read(reinterpret_cast<char*>(l.header.lengths.data()),
            static_cast<std::streamsize>(l.header.dim * sizeof(double)));
    if (!in)
        throw IoError(path + ": truncated header");

    l.payload.resize(count);
    in.read(reinterpret_cast<char*>(l.payload.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!in || in.gcount() != static_cast<std::streamsize>(count * sizeof(double)))
        throw IoError(path + ": truncated payload (expected " + std::to_string(count) +
                      " values)");

    l.grid = Grid::make(static_cast<int>(l.header.dim), l.header.lengths, modes);
    return l;
}

} // namespace

void write_field(const std::string& path, const SpectralField& field) {
    write_raw(path, make_header(field.grid(), FieldFileKind::spectral), field.coeffs());
}

void write_field(const std::string& path, const GridField& field) {
    write_raw(path, make_header(field.grid(), FieldFileKind::nodal), field.values());
}

FieldFileKind peek_field_kind(const std::string& path) {
    return static_cast<FieldFileKind>(read_raw(path).header.kind);
}

SpectralField read_spectral_field(const std::string& path) {
    Loaded l = read_raw(path);
    if (l.header.kind != static_cast<std::uint32_t>(FieldFileKind::spectral))
        throw IoError(path + ": expected a spectral field, file holds nodal values");
    return SpectralField(l.grid, std::move(l.payload));
}

GridField read_nodal_field(const std::string& path) {
    Loaded l = read_raw(path);
    if (l.header.kind != static_cast<std::uint32_t>(FieldFileKind::nodal))
        throw IoError(path + ": expected a nodal field, file holds spectral coefficients");
    return GridField(l.grid, std::move(l.payload));
}

} // namespace ch6
