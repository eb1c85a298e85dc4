#include "sim/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

namespace sim::io {

namespace {

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>(v >> 8));
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) out.push_back(static_cast<char>((v >> s) & 0xff));
}

std::uint32_t get_u32(std::string_view b, std::size_t at) {
    std::uint32_t v = 0;
    for (int k = 3; k >= 0; --k) v = (v << 8) | static_cast<unsigned char>(b[at + k]);
    return v;
}

std::uint16_t get_u16(std::string_view b, std::size_t at) {
    return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) |
                                      (static_cast<unsigned char>(b[at + 1]) << 8));
}

std::string trim(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
    std::size_t b = 0;
    while (b < s.size() && (s[b] == ' ' || s[b] == '\t')) ++b;
    return s.substr(b);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

template <typename T>
bool parse_number(const std::string& s, T& out) {
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(path.string() + ": cannot open file");
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

std::string encode_matrix(const Matrix<float>& m) {
    if (m.rows() > UINT32_MAX || m.cols() > UINT32_MAX) throw FormatError("matrix too large");
    std::string out;
    out.reserve(kMatrixHeaderSize + m.size() * 4);
    out.append("SIMM");
    put_u16(out, kMatrixVersion);
    put_u32(out, static_cast<std::uint32_t>(m.rows()));
    put_u32(out, static_cast<std::uint32_t>(m.cols()));
    for (float v : m.data()) put_u32(out, std::bit_cast<std::uint32_t>(v));
    return out;
}

Matrix<float> decode_matrix(std::string_view bytes) {
    if (bytes.size() < kMatrixHeaderSize || bytes.substr(0, 4) != "SIMM") {
        throw FormatError("bad matrix header");
    }
    const std::uint16_t version = get_u16(bytes, 4);
    if (version != kMatrixVersion) {
        throw FormatError("unsupported matrix version " + std::to_string(version));
    }
    const std::size_t rows = get_u32(bytes, 6);
    const std::size_t cols = get_u32(bytes, 10);
    const std::size_t expected = kMatrixHeaderSize + rows * cols * 4;
    if (bytes.size() != expected) {
        throw FormatError("matrix payload is " + std::to_string(bytes.size()) + " bytes, expected " +
                          std::to_string(expected));
    }
    std::vector<float> values(rows * cols);
    for (std::size_t k = 0; k < values.size(); ++k) {
        values[k] = std::bit_cast<float>(get_u32(bytes, kMatrixHeaderSize + 4 * k));
    }
    return Matrix<float>(rows, cols, std::move(values));
}

Matrix<float> to_float(const Matrix<double>& m) {
    std::vector<float> v(m.size());
    std::transform(m.data().begin(), m.data().end(), v.begin(),
                   [](double x) { return static_cast<float>(x); });
    return Matrix<float>(m.rows(), m.cols(), std::move(v));
}

Matrix<double> to_double(const Matrix<float>& m) {
    std::vector<double> v(m.data().begin(), m.data().end());
    return Matrix<double>(m.rows(), m.cols(), std::move(v));
}

void write_matrix_file(const std::filesystem::path& path, const Matrix<float>& m) {
    write_text_file(path, encode_matrix(m));
}

Matrix<float> read_matrix_file(const std::filesystem::path& path) {
    try {
        return decode_matrix(slurp(path));
    } catch (const FormatError& e) {
        const std::string msg = e.what();
        if (msg.rfind(path.string(), 0) == 0) throw;
        throw FormatError(path.string() + ": " + msg);
    }
}

Matrix<double> parse_csv_matrix(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty CSV matrix");
    const auto head = split(trim(line), ',');
    std::size_t rows = 0, cols = 0;
    if (head.size() != 2 || !parse_number(head[0], rows) || !parse_number(head[1], cols)) {
        throw FormatError("CSV matrix header must be \"rows,cols\"");
    }
    std::vector<double> values;
    values.reserve(rows * cols);
    std::size_t r = 0;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != cols || r >= rows) {
            throw FormatError("CSV matrix row " + std::to_string(r + 1) + " has wrong shape");
        }
        for (const auto& c : cells) {
            double v = 0.0;
            if (!parse_number(c, v)) throw FormatError("CSV matrix: bad number '" + c + "'");
            values.push_back(v);
        }
        ++r;
    }
    if (r != rows) throw FormatError("CSV matrix has " + std::to_string(r) + " rows, header says " +
                                     std::to_string(rows));
    return Matrix<double>(rows, cols, std::move(values));
}

Matrix<double> read_matrix(const std::filesystem::path& path) {
    if (path.extension() == ".csv") {
        std::ifstream in(path);
        if (!in) throw FormatError(path.string() + ": cannot open file");
        try {
            return parse_csv_matrix(in);
        } catch (const FormatError& e) {
            throw FormatError(path.string() + ": " + e.what());
        }
    }
    return to_double(read_matrix_file(path));
}

std::vector<RawSample> parse_registry(std::istream& in) {
    std::vector<RawSample> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        const auto f = split(line, ',');
        const std::string where = "registry line " + std::to_string(line_no);
        if (f.size() != 4) throw FormatError(where + ": expected index,person,modality,camera");
        RawSample s;
        if (!parse_number(f[0], s.index)) throw FormatError(where + ": bad index '" + f[0] + "'");
        if (f[1].empty()) throw FormatError(where + ": empty person label");
        s.person = f[1];
        try {
            s.modality = parse_modality(f[2]);
        } catch (const Error& e) {
            throw FormatError(where + ": " + e.what());
        }
        if (!f[3].empty()) {
            std::int32_t cam = 0;
            if (!parse_number(f[3], cam)) throw FormatError(where + ": bad camera '" + f[3] + "'");
            s.camera = cam;
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<RawSample> read_registry_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError(path.string() + ": cannot open file");
    try {
        return parse_registry(in);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

std::pair<Registry, Registry> resolve_person_labels(const std::vector<RawSample>& queries,
                                                    const std::vector<RawSample>& gallery) {
    bool all_numeric = true;
    std::map<std::string, std::int64_t> ids;
    for (const auto* set : {&queries, &gallery}) {
        for (const auto& s : *set) {
            std::int64_t v = 0;
            if (!parse_number(s.person, v)) all_numeric = false;
            ids.emplace(s.person, 0);
        }
    }
    std::int64_t next = 0;
    for (auto& [label, id] : ids) id = next++;

    auto convert = [&](const std::vector<RawSample>& raw) {
        Registry reg;
        reg.reserve(raw.size());
        for (const auto& s : raw) {
            std::int64_t person = 0;
            if (all_numeric) {
                parse_number(s.person, person);
            } else {
                person = ids.at(s.person);
            }
            reg.push_back(SampleId{s.index, person, s.modality, s.camera});
        }
        return reg;
    };
    return {convert(queries), convert(gallery)};
}

std::string format_registry(const Registry& reg) {
    std::string out;
    for (const auto& s : reg) {
        out += std::to_string(s.index) + ',' + std::to_string(s.person) + ',' +
               to_string(s.modality) + ',' + (s.camera ? std::to_string(*s.camera) : "") + '\n';
    }
    return out;
}

std::string format_fixed(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 6);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

std::string format_rankings(const Registry& queries, const Registry& gallery,
                            const Rankings& rankings) {
    std::string out;
    for (std::size_t q = 0; q < rankings.size(); ++q) {
        out += std::to_string(queries.at(q).index);
        for (std::size_t g : rankings[q]) {
            out += ' ';
            out += std::to_string(gallery.at(g).index);
        }
        out += '\n';
    }
    return out;
}

std::string format_report(const EvalReport& report) {
    std::string out;
    out += "mAP " + format_fixed(report.map) + '\n';
    for (std::size_t r : {1, 5, 10, 20}) {
        if (r <= report.cmc.size()) out += "rank" + std::to_string(r) + ' ' + format_fixed(report.rank(r)) + '\n';
    }
    out += "trials " + std::to_string(report.trials) + '\n';
    out += "seed " + std::to_string(report.seed) + '\n';
    out += "excluded_queries " + std::to_string(report.excluded_queries) + '\n';
    return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError(path.string() + ": cannot write file");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw FormatError(path.string() + ": write failed");
}

}  // namespace sim::io
