#include "acfront/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace acfront {

namespace {

template <class T>
T to_le(T v) {
    if constexpr (std::endian::native == std::endian::big) {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        for (std::size_t k = 0; k < sizeof(T) / 2; ++k) std::swap(b[k], b[sizeof(T) - 1 - k]);
        std::memcpy(&v, b, sizeof(T));
    }
    return v;
}

template <class T>
void put(unsigned char* dst, T v) {
    v = to_le(v);
    std::memcpy(dst, &v, sizeof(T));
}

template <class T>
T get(const unsigned char* src) {
    T v;
    std::memcpy(&v, src, sizeof(T));
    return to_le(v);
}

void write_array(std::ostream& out, const char* name, const std::vector<double>& v) {
    out << "{\"field\":\"" << name << "\",\"values\":[";
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) out << ',';
        out << format_double(v[k]);
    }
    out << "]}\n";
}

std::vector<double> json_array(const nlohmann::json& j) {
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& x : j) out.push_back(x.get<double>());
    return out;
}

}  // namespace

void write_snapshot(const std::string& path, const LatticeField& u, double t) {
    unsigned char header[kSnapshotHeaderBytes] = {};
    std::memcpy(header, "ACF1", 4);
    put<std::uint32_t>(header + 4, static_cast<std::uint32_t>(u.width()));
    put<std::uint32_t>(header + 8, static_cast<std::uint32_t>(u.height()));
    put<std::uint32_t>(header + 12, u.boundary_j() == BoundaryJ::reflect ? 1u : 0u);
    put<std::int64_t>(header + 16, u.i_offset());
    put<double>(header + 24, t);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write snapshot " + path);
    out.write(reinterpret_cast<const char*>(header), sizeof header);
    for (double v : u.values()) {
        unsigned char b[8];
        put<double>(b, v);
        out.write(reinterpret_cast<const char*>(b), 8);
    }
    if (!out) throw UsageError("write failed for snapshot " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open snapshot " + path);
    unsigned char header[kSnapshotHeaderBytes];
    if (!in.read(reinterpret_cast<char*>(header), sizeof header))
        throw UsageError(path + ": truncated snapshot header");
    if (std::memcmp(header, "ACF1", 4) != 0) throw UsageError(path + ": bad snapshot magic");
    const auto width = get<std::uint32_t>(header + 4);
    const auto height = get<std::uint32_t>(header + 8);
    const auto bc = get<std::uint32_t>(header + 12);
    const auto i_offset = get<std::int64_t>(header + 16);
    if (width == 0 || height == 0 || bc > 1) throw UsageError(path + ": bad snapshot geometry");

    Snapshot s;
    s.t = get<double>(header + 24);
    s.field = LatticeField(static_cast<int>(width), static_cast<int>(height), static_cast<int>(i_offset),
                           bc == 1 ? BoundaryJ::reflect : BoundaryJ::periodic);
    auto values = s.field.values();
    std::vector<unsigned char> raw(values.size() * 8);
    if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size())))
        throw UsageError(path + ": truncated snapshot data");
    for (std::size_t k = 0; k < values.size(); ++k) values[k] = get<double>(raw.data() + 8 * k);
    if (!s.field.all_finite()) throw NonFinite(path + ": snapshot contains non-finite values");
    return s;
}

void append_snapshot_index(std::ostream& index, long step, double t, const std::string& file) {
    nlohmann::json rec = {{"step", step}, {"t", t}, {"file", file}};
    index << rec.dump() << '\n';
}

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_wave(std::ostream& out, const WaveProfile& w) {
    const auto& f = w.f;
    out << "{\"record\":\"wave\",\"version\":1"
        << ",\"a\":" << format_double(f.a())
        << ",\"kind\":\"" << (f.kind() == BistableNonlinearity::Kind::cubic ? "cubic" : "table") << '"';
    if (f.kind() == BistableNonlinearity::Kind::table)
        out << ",\"u_min\":" << format_double(f.u_min()) << ",\"u_max\":" << format_double(f.u_max())
            << ",\"rule\":\"" << (f.rule() == BistableNonlinearity::Interp::linear ? "linear" : "cubic") << '"';
    out << ",\"theta\":" << format_double(w.theta) << ",\"L\":" << format_double(w.L)
        << ",\"h\":" << format_double(w.h) << ",\"n\":" << w.size() << ",\"c\":" << format_double(w.c)
        << ",\"has_psi\":" << (w.has_psi ? "true" : "false")
        << ",\"sigma_min\":" << format_double(w.sigma_min)
        << ",\"sigma_ratio\":" << format_double(w.sigma_ratio)
        << ",\"has_d\":" << (w.has_d ? "true" : "false") << ",\"d\":" << format_double(w.d)
        << ",\"has_r\":" << (w.has_r ? "true" : "false") << "}\n";
    if (f.kind() == BistableNonlinearity::Kind::table) write_array(out, "g", f.samples());
    write_array(out, "phi", w.phi);
    write_array(out, "dphi", w.dphi);
    write_array(out, "d2phi", w.d2phi);
    if (w.has_psi) write_array(out, "psi", w.psi);
    if (w.has_r) {
        write_array(out, "r", w.r);
        write_array(out, "dr", w.dr);
    }
}

void write_wave(const std::string& path, const WaveProfile& w) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write wave file " + path);
    write_wave(out, w);
}

WaveProfile read_wave(std::istream& in) {
    std::string line;
    nlohmann::json meta;
    std::vector<std::pair<std::string, std::vector<double>>> arrays;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw UsageError("wave file line " + std::to_string(number) + ": " + e.what());
        }
        if (rec.contains("record")) {
            meta = rec;
        } else if (rec.contains("field") && rec.contains("values")) {
            arrays.emplace_back(rec["field"].get<std::string>(), json_array(rec["values"]));
        } else {
            throw UsageError("wave file line " + std::to_string(number) + ": unknown record");
        }
    }
    if (meta.is_null() || meta.value("record", "") != "wave") throw UsageError("wave file has no metadata record");

    auto find = [&](const std::string& name) -> const std::vector<double>* {
        for (const auto& [k, v] : arrays)
            if (k == name) return &v;
        return nullptr;
    };

    WaveProfile w;
    try {
        const double a = meta.at("a").get<double>();
        if (meta.at("kind").get<std::string>() == "table") {
            const auto* g = find("g");
            if (!g) throw UsageError("table nonlinearity without samples");
            const auto rule = meta.value("rule", "cubic") == "linear" ? BistableNonlinearity::Interp::linear
                                                                      : BistableNonlinearity::Interp::cubic;
            w.f = BistableNonlinearity::table(a, meta.at("u_min").get<double>(), meta.at("u_max").get<double>(), *g,
                                              rule);
        } else {
            w.f = BistableNonlinearity::cubic(a);
        }
        w.theta = meta.at("theta").get<double>();
        w.L = meta.at("L").get<double>();
        w.h = meta.at("h").get<double>();
        w.c = meta.at("c").get<double>();
        w.has_psi = meta.at("has_psi").get<bool>();
        w.sigma_min = meta.value("sigma_min", 0.0);
        w.sigma_ratio = meta.value("sigma_ratio", 0.0);
        w.has_d = meta.at("has_d").get<bool>();
        w.d = meta.at("d").get<double>();
        w.has_r = meta.at("has_r").get<bool>();
        const auto n = meta.at("n").get<std::size_t>();
        auto take = [&](const char* name, std::vector<double>& dst, bool required) {
            const auto* v = find(name);
            if (!v) {
                if (required) throw UsageError(std::string("wave file lacks field ") + name);
                return;
            }
            if (v->size() != n) throw UsageError(std::string("wave field ") + name + " has wrong length");
            dst = *v;
        };
        take("phi", w.phi, true);
        take("dphi", w.dphi, true);
        take("d2phi", w.d2phi, true);
        take("psi", w.psi, w.has_psi);
        take("r", w.r, w.has_r);
        take("dr", w.dr, w.has_r);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("wave metadata: ") + e.what());
    }
    return w;
}

WaveProfile read_wave(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open wave file " + path);
    return read_wave(in);
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + '"';
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t k = 0; k < fields.size(); ++k) {
        if (k) out << ',';
        out << csv_escape(fields[k]);
    }
    out << "\r\n";
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;
    char ch;
    while (in.get(ch)) {
        any = true;
        if (quoted) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    field += '"';
                    in.get();
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            row.push_back(std::move(field));
            field.clear();
        } else if (ch == '\n' || ch == '\r') {
            if (ch == '\r' && in.peek() == '\n') in.get();
            row.push_back(std::move(field));
            field.clear();
            rows.push_back(std::move(row));
            row.clear();
            any = false;
        } else {
            field += ch;
        }
    }
    if (quoted) throw UsageError("CSV ends inside a quoted field");
    if (any) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open CSV file " + path);
    return read_csv(in);
}

void write_phase_csv_header(std::ostream& out) { write_csv_row(out, {"t", "j", "gamma", "defined"}); }

void write_phase_csv(std::ostream& out, double t, const PhaseExtract& g) {
    for (int j = 0; j < g.gamma.size(); ++j) {
        const bool def = g.defined[static_cast<std::size_t>(j)] != 0;
        write_csv_row(out, {format_double(t), std::to_string(j), def ? format_double(g.gamma[j]) : "",
                            def ? "1" : "0"});
    }
}

PhaseSequence read_phase_sequence_csv(const std::string& path, BoundaryJ boundary_j) {
    const auto rows = read_csv(path);
    std::vector<double> values;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.empty() || (row.size() == 1 && row[0].empty())) continue;
        const std::string& cell = row.back();
        try {
            std::size_t used = 0;
            const double v = std::stod(cell, &used);
            if (used != cell.size() || !std::isfinite(v)) throw std::invalid_argument(cell);
            values.push_back(v);
        } catch (const std::exception&) {
            if (r == 0 && values.empty()) continue;  // header
            throw UsageError(path + ": row " + std::to_string(r + 1) + " is not numeric");
        }
    }
    if (values.size() < 2) throw UsageError(path + ": need at least two values");
    return PhaseSequence(std::move(values), boundary_j);
}

}  // namespace acfront
