#include "paraflow/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace paraflow::io {

namespace {

constexpr char kMagic[4] = {'P', 'S', 'H', 'F'};
constexpr std::uint32_t kVersion = 1;

void write_header(std::ofstream& out, std::uint64_t n) {
    out.write(kMagic, 4);
    std::uint32_t v = kVersion;
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
}

std::uint64_t read_header(std::ifstream& in, const std::string& path) {
    char magic[4];
    std::uint32_t v = 0;
    std::uint64_t n = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("bad snapshot header: " + path);
    if (v != kVersion) throw std::runtime_error("unsupported snapshot version: " + path);
    return n;
}

}  // namespace

void write_physical(const std::string& path, const ScalarField& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_header(out, static_cast<std::uint64_t>(f.grid().n));
    auto samples = f.to_physical();
    out.write(reinterpret_cast<const char*>(samples.data()),
              static_cast<std::streamsize>(samples.size() * sizeof(double)));
}

void write_spectral(const std::string& path, const ScalarField& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_header(out, static_cast<std::uint64_t>(f.grid().n));
    out.write(reinterpret_cast<const char*>(f.coef().data()),
              static_cast<std::streamsize>(f.coef().size() * sizeof(cplx)));
}

ScalarField read_physical(const std::string& path, double half_width) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    auto n = read_header(in, path);
    Grid g(static_cast<int>(n), half_width);
    std::vector<double> samples(g.size());
    in.read(reinterpret_cast<char*>(samples.data()),
            static_cast<std::streamsize>(samples.size() * sizeof(double)));
    if (!in) throw std::runtime_error("truncated snapshot: " + path);
    return ScalarField::from_physical(g, samples);
}

ScalarField read_spectral(const std::string& path, double half_width) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    auto n = read_header(in, path);
    Grid g(static_cast<int>(n), half_width);
    std::vector<cplx> coef(g.size());
    in.read(reinterpret_cast<char*>(coef.data()),
            static_cast<std::streamsize>(coef.size() * sizeof(cplx)));
    if (!in) throw std::runtime_error("truncated snapshot: " + path);
    return ScalarField(g, std::move(coef));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct CsvWriter::Impl {
    std::ofstream out;
    std::size_t columns = 0;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : impl_(new Impl) {
    impl_->out.open(path);
    if (!impl_->out) throw std::runtime_error("cannot open " + path);
    impl_->columns = columns.size();
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) impl_->out << ',';
        impl_->out << columns[i];
    }
    impl_->out << '\n';
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != impl_->columns)
        throw std::invalid_argument("csv row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) impl_->out << ',';
        impl_->out << format_double(values[i]);
    }
    impl_->out << '\n';
}

}  // namespace paraflow::io
