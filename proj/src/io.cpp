#include "gxr/io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace gxr {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
void put(std::string& out, T v)
{
    char bytes[sizeof(T)];
    std::memcpy(bytes, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    out.append(bytes, sizeof(T));
}

class Reader {
public:
    Reader(std::string data, std::string path) : data_(std::move(data)), path_(std::move(path)) {}

    template <typename T>
    T get()
    {
        if (pos_ + sizeof(T) > data_.size()) throw FormatError(path_ + ": file is truncated");
        char bytes[sizeof(T)];
        std::memcpy(bytes, data_.data() + pos_, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
        pos_ += sizeof(T);
        T v;
        std::memcpy(&v, bytes, sizeof(T));
        return v;
    }

    void expect_magic(const char* magic)
    {
        if (data_.size() < 4 || data_.compare(0, 4, magic) != 0)
            throw FormatError(path_ + ": bad magic bytes (expected " + magic + ")");
        pos_ = 4;
    }

    void expect_end() const
    {
        if (pos_ != data_.size()) throw FormatError(path_ + ": trailing bytes after payload");
    }

private:
    std::string data_;
    std::string path_;
    std::size_t pos_ = 0;
};

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream s;
    s << in.rdbuf();
    if (in.bad()) throw IoError("error reading '" + path + "'");
    return s.str();
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string meta_lines(const Metadata& meta)
{
    std::string out;
    for (const auto& [k, v] : meta) out += "# " + k + "=" + v + "\n";
    return out;
}

void write_sidecar(const std::string& path, const Metadata& meta)
{
    const std::string side = path + ".meta";
    if (meta.empty()) {
        std::error_code ec;
        std::filesystem::remove(side, ec);
        return;
    }
    std::string text;
    for (const auto& [k, v] : meta) text += k + "=" + v + "\n";
    write_atomic(side, text);
}

void read_sidecar(const std::string& path, Metadata* meta)
{
    if (!meta) return;
    std::ifstream in(path + ".meta");
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq != std::string::npos) (*meta)[line.substr(0, eq)] = line.substr(eq + 1);
    }
}

// Header comment lines of a CSV file: "# key=value". Returns remaining lines.
std::vector<std::string> parse_csv(const std::string& path, Metadata& header)
{
    std::istringstream in(slurp(path));
    std::vector<std::string> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(1, eq - 1);
            key.erase(0, key.find_first_not_of(' '));
            header[key] = line.substr(eq + 1);
            continue;
        }
        rows.push_back(line);
    }
    return rows;
}

double header_number(const Metadata& h, const std::string& key, const std::string& path)
{
    auto it = h.find(key);
    if (it == h.end()) throw FormatError(path + ": missing '# " + key + "=' header line");
    try {
        std::size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw FormatError(path + ": header '" + key + "' is not a number");
    }
}

std::vector<double> row_numbers(const std::string& line, std::size_t count, const std::string& path)
{
    std::vector<double> out;
    std::istringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(cell, &used));
            if (used != cell.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw FormatError(path + ": bad number '" + cell + "'");
        }
    }
    if (out.size() != count) throw FormatError(path + ": expected " + std::to_string(count) + " columns in '" + line + "'");
    return out;
}

void strip_reserved(Metadata& h, std::initializer_list<const char*> keys)
{
    for (const char* k : keys) h.erase(k);
}

std::uint32_t checked_size(std::uint32_t v, const std::string& path)
{
    if (v == 0 || v > (1u << 20)) throw FormatError(path + ": implausible grid size " + std::to_string(v));
    return v;
}

DiskModel model_from(double kappa, double radius, const std::string& path)
{
    try {
        return DiskModel(kappa, radius);
    } catch (const Error& e) {
        throw FormatError(path + ": header holds an invalid model (" + e.what() + ")");
    }
}

} // namespace

FileFormat format_for_path(const std::string& path)
{
    const std::string ext = std::filesystem::path(path).extension().string();
    return ext == ".csv" ? FileFormat::csv : FileFormat::binary;
}

void write_atomic(const std::string& path, const std::string& content)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw IoError("error writing '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move output into place at '" + path + "'");
    }
}

// ---------------------------------------------------------------------------

void write_sinogram(const std::string& path, const GridSinogram& sino, const Metadata& meta)
{
    const DiskModel& m = sino.grid.model();
    if (format_for_path(path) == FileFormat::csv) {
        std::string text = "# gxr sinogram\n# kappa=" + fmt(m.kappa()) + "\n# radius=" + fmt(m.radius())
            + "\n# n_beta=" + std::to_string(sino.grid.n_beta()) + "\n# n_alpha=" + std::to_string(sino.grid.n_alpha())
            + "\n" + meta_lines(meta) + "i,j,beta,alpha,re,im\n";
        for (int i = 0; i < sino.grid.n_beta(); ++i) {
            for (int j = 0; j < sino.grid.n_alpha(); ++j) {
                const Complex v = sino.at(i, j);
                text += std::to_string(i) + "," + std::to_string(j) + "," + fmt(sino.grid.beta(i)) + ","
                    + fmt(sino.grid.alpha(j)) + "," + fmt(v.real()) + "," + fmt(v.imag()) + "\n";
            }
        }
        write_atomic(path, text);
        return;
    }
    std::string out = "GXR1";
    put(out, m.kappa());
    put(out, m.radius());
    put(out, static_cast<std::uint32_t>(sino.grid.n_beta()));
    put(out, static_cast<std::uint32_t>(sino.grid.n_alpha()));
    for (const Complex& v : sino.values) {
        put(out, v.real());
        put(out, v.imag());
    }
    write_atomic(path, out);
    write_sidecar(path, meta);
}

GridSinogram read_sinogram(const std::string& path, Metadata* meta)
{
    if (format_for_path(path) == FileFormat::csv) {
        Metadata h;
        const auto rows = parse_csv(path, h);
        const DiskModel m = model_from(header_number(h, "kappa", path), header_number(h, "radius", path), path);
        const int nb = static_cast<int>(header_number(h, "n_beta", path));
        const int na = static_cast<int>(header_number(h, "n_alpha", path));
        if (nb <= 0 || na <= 0) throw FormatError(path + ": bad grid size");
        GridSinogram sino(SinogramGrid(m, nb, na));
        if (rows.empty() || rows[0] != "i,j,beta,alpha,re,im") throw FormatError(path + ": missing column header");
        if (rows.size() != sino.values.size() + 1) throw FormatError(path + ": wrong number of rows");
        for (std::size_t r = 1; r < rows.size(); ++r) {
            const auto v = row_numbers(rows[r], 6, path);
            const int i = static_cast<int>(v[0]), j = static_cast<int>(v[1]);
            if (i < 0 || i >= nb || j < 0 || j >= na) throw FormatError(path + ": index out of range");
            sino.at(i, j) = Complex(v[4], v[5]);
        }
        if (meta) {
            strip_reserved(h, {"kappa", "radius", "n_beta", "n_alpha"});
            *meta = h;
        }
        return sino;
    }
    Reader in(slurp(path), path);
    in.expect_magic("GXR1");
    const double kappa = in.get<double>();
    const double radius = in.get<double>();
    const auto nb = checked_size(in.get<std::uint32_t>(), path);
    const auto na = checked_size(in.get<std::uint32_t>(), path);
    GridSinogram sino(SinogramGrid(model_from(kappa, radius, path), static_cast<int>(nb), static_cast<int>(na)));
    for (auto& v : sino.values) {
        const double re = in.get<double>();
        const double im = in.get<double>();
        v = Complex(re, im);
    }
    in.expect_end();
    read_sidecar(path, meta);
    return sino;
}

void write_field(const std::string& path, const GridField& field, const Metadata& meta)
{
    const DiskModel& m = field.grid.model();
    if (format_for_path(path) == FileFormat::csv) {
        std::string text = "# gxr field\n# kappa=" + fmt(m.kappa()) + "\n# radius=" + fmt(m.radius())
            + "\n# n_rho=" + std::to_string(field.grid.n_rho()) + "\n# n_omega=" + std::to_string(field.grid.n_omega())
            + "\n" + meta_lines(meta) + "i,j,x,y,re,im\n";
        for (int i = 0; i < field.grid.n_rho(); ++i) {
            for (int j = 0; j < field.grid.n_omega(); ++j) {
                const Complex z = field.grid.point(i, j);
                const Complex v = field.at(i, j);
                text += std::to_string(i) + "," + std::to_string(j) + "," + fmt(z.real()) + "," + fmt(z.imag()) + ","
                    + fmt(v.real()) + "," + fmt(v.imag()) + "\n";
            }
        }
        write_atomic(path, text);
        return;
    }
    std::string out = "GXF1";
    put(out, m.kappa());
    put(out, m.radius());
    put(out, static_cast<std::uint32_t>(field.grid.n_rho()));
    put(out, static_cast<std::uint32_t>(field.grid.n_omega()));
    for (const Complex& v : field.values) {
        put(out, v.real());
        put(out, v.imag());
    }
    write_atomic(path, out);
    write_sidecar(path, meta);
}

GridField read_field(const std::string& path, Metadata* meta)
{
    if (format_for_path(path) == FileFormat::csv) {
        Metadata h;
        const auto rows = parse_csv(path, h);
        const DiskModel m = model_from(header_number(h, "kappa", path), header_number(h, "radius", path), path);
        const int nr = static_cast<int>(header_number(h, "n_rho", path));
        const int nw = static_cast<int>(header_number(h, "n_omega", path));
        if (nr <= 0 || nw <= 0) throw FormatError(path + ": bad grid size");
        GridField field(DiskGrid(m, nr, nw));
        if (rows.empty() || rows[0] != "i,j,x,y,re,im") throw FormatError(path + ": missing column header");
        if (rows.size() != field.values.size() + 1) throw FormatError(path + ": wrong number of rows");
        for (std::size_t r = 1; r < rows.size(); ++r) {
            const auto v = row_numbers(rows[r], 6, path);
            const int i = static_cast<int>(v[0]), j = static_cast<int>(v[1]);
            if (i < 0 || i >= nr || j < 0 || j >= nw) throw FormatError(path + ": index out of range");
            field.at(i, j) = Complex(v[4], v[5]);
        }
        if (meta) {
            strip_reserved(h, {"kappa", "radius", "n_rho", "n_omega"});
            *meta = h;
        }
        return field;
    }
    Reader in(slurp(path), path);
    in.expect_magic("GXF1");
    const double kappa = in.get<double>();
    const double radius = in.get<double>();
    const auto nr = checked_size(in.get<std::uint32_t>(), path);
    const auto nw = checked_size(in.get<std::uint32_t>(), path);
    GridField field(DiskGrid(model_from(kappa, radius, path), static_cast<int>(nr), static_cast<int>(nw)));
    for (auto& v : field.values) {
        const double re = in.get<double>();
        const double im = in.get<double>();
        v = Complex(re, im);
    }
    in.expect_end();
    read_sidecar(path, meta);
    return field;
}

void write_coefficients_csv(const std::string& path, const SpectralField& spec, const Metadata& meta)
{
    const DiskModel& m = spec.model();
    std::string text = "# gxr coefficients\n# kappa=" + fmt(m.kappa()) + "\n# radius=" + fmt(m.radius())
        + "\n# degree=" + std::to_string(spec.degree()) + "\n" + meta_lines(meta) + "n,k,re,im\n";
    for (int n = 0; n <= spec.degree(); ++n)
        for (int k = 0; k <= n; ++k)
            text += std::to_string(n) + "," + std::to_string(k) + "," + fmt(spec(n, k).real()) + ","
                + fmt(spec(n, k).imag()) + "\n";
    write_atomic(path, text);
}

SpectralField read_coefficients_csv(const std::string& path, Metadata* meta)
{
    Metadata h;
    const auto rows = parse_csv(path, h);
    const DiskModel m = model_from(header_number(h, "kappa", path), header_number(h, "radius", path), path);
    const int degree = static_cast<int>(header_number(h, "degree", path));
    if (degree < 0) throw FormatError(path + ": negative degree");
    SpectralField spec(m, degree);
    if (rows.empty() || rows[0] != "n,k,re,im") throw FormatError(path + ": missing column header n,k,re,im");
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto v = row_numbers(rows[r], 4, path);
        const int n = static_cast<int>(v[0]), k = static_cast<int>(v[1]);
        if (!spec.contains(n, k)) throw FormatError(path + ": coefficient index out of range");
        spec(n, k) = Complex(v[2], v[3]);
    }
    if (meta) {
        strip_reserved(h, {"kappa", "radius", "degree"});
        *meta = h;
    }
    return spec;
}

void write_pgm(const std::string& path, const SpectralField& spec, Frame frame, int size, const Metadata& meta)
{
    if (size < 2) throw Error("preview size must be at least 2");
    const double R = spec.model().radius();
    std::vector<double> mag(static_cast<std::size_t>(size) * size, -1.0);
    double lo = 1e300, hi = -1e300;
    for (int r = 0; r < size; ++r) {
        for (int c = 0; c < size; ++c) {
            const Complex z(R * (2.0 * (c + 0.5) / size - 1.0), R * (1.0 - 2.0 * (r + 0.5) / size));
            if (std::abs(z) >= R) continue;
            const double v = std::abs(evaluate(spec, z, frame));
            mag[static_cast<std::size_t>(r) * size + c] = v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    std::string out = "P5\n" + std::to_string(size) + " " + std::to_string(size) + "\n255\n";
    const double span = hi > lo ? hi - lo : 1.0;
    for (double v : mag) {
        const int byte = v < 0.0 ? 0 : static_cast<int>(std::lround(255.0 * (v - lo) / span));
        out.push_back(static_cast<char>(std::clamp(byte, 0, 255)));
    }
    write_atomic(path, out);
    std::string side = "# gxr preview scaling: byte = 255 * (|f| - min) / (max - min), outside disk = 0\nmin=" + fmt(lo)
        + "\nmax=" + fmt(hi) + "\n";
    for (const auto& [k, v] : meta) side += k + "=" + v + "\n";
    write_atomic(path + ".txt", side);
}

} // namespace gxr
