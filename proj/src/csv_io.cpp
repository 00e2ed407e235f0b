#include "cvlab/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "cvlab/errors.hpp"

namespace cvlab {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv_line(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        std::string_view field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
        while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
        while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
        out.emplace_back(field);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

double parse_double(std::string_view text, std::string_view what) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw DomainError(std::string(what) + ": not a finite number: '" + std::string(text) + "'");
    }
    return v;
}

namespace {

bool blank(std::string_view line) {
    return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

std::string at_line(std::size_t line) { return "line " + std::to_string(line); }

}  // namespace

StratifiedDataset parse_dataset_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) continue;
        header = split_csv_line(line);
        break;
    }
    if (header.empty()) throw DomainError("dataset: missing header");
    if (header[0] != "class") throw DomainError("dataset: first column must be 'class'");
    const std::size_t p = header.size() - 1;
    if (p == 0) throw DomainError("dataset: no feature columns");

    std::vector<double> v1, v2;
    std::size_t n1 = 0, n2 = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw DomainError("dataset " + at_line(lineno) + ": expected " +
                              std::to_string(header.size()) + " fields, got " +
                              std::to_string(fields.size()));
        }
        std::vector<double>* dst = nullptr;
        if (fields[0] == "1") {
            dst = &v1;
            ++n1;
        } else if (fields[0] == "2") {
            dst = &v2;
            ++n2;
        } else {
            throw DomainError("dataset " + at_line(lineno) + ": class must be 1 or 2, got '" +
                              fields[0] + "'");
        }
        for (std::size_t k = 1; k < fields.size(); ++k) {
            dst->push_back(parse_double(fields[k], "dataset " + at_line(lineno)));
        }
    }
    if (n1 == 0 || n2 == 0) throw DomainError("dataset: both classes need at least one row");
    return StratifiedDataset(FeatureMatrix(n1, p, std::move(v1)), FeatureMatrix(n2, p, std::move(v2)));
}

StratifiedDataset read_dataset_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset '" + path.string() + "'");
    return parse_dataset_csv(in);
}

std::string dataset_to_csv(const StratifiedDataset& data) {
    std::string out = "class";
    for (std::size_t k = 1; k <= data.dim(); ++k) out += ",f" + std::to_string(k);
    out += '\n';
    for (std::size_t i = 0; i < data.n(); ++i) {
        const LabeledPoint pt = data.pooled_point(i);
        out += pt.label == ClassLabel::One ? "1" : "2";
        for (double v : pt.features) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

PairedPerformanceSample parse_paired_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    std::vector<double> s, s_hat;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) continue;
        const auto fields = split_csv_line(line);
        if (!have_header) {
            if (fields.size() != 2 || fields[0] != "s" || fields[1] != "s_hat") {
                throw DomainError("paired sample: header must be 's,s_hat'");
            }
            have_header = true;
            continue;
        }
        if (fields.size() != 2) {
            throw DomainError("paired sample " + at_line(lineno) + ": expected 2 fields");
        }
        s.push_back(parse_double(fields[0], "paired sample " + at_line(lineno)));
        s_hat.push_back(parse_double(fields[1], "paired sample " + at_line(lineno)));
    }
    if (!have_header) throw DomainError("paired sample: missing header");
    return PairedPerformanceSample(std::move(s), std::move(s_hat));
}

PairedPerformanceSample read_paired_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open paired sample '" + path.string() + "'");
    return parse_paired_csv(in);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot rename onto '" + path.string() + "': " + ec.message());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace cvlab
