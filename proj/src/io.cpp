#include "pcfl/io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace pcfl {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_number(const std::string& s, const std::string& name, std::size_t line_no) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || !std::isfinite(v)) {
        throw InputError(name + ": line " + std::to_string(line_no) + ": '" + s +
                         "' is not a number");
    }
    return v;
}

std::vector<std::string> non_empty_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) lines.push_back(line);
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    return lines;
}

// header column role; vector columns are `c_1..c_d` / `e_1..e_k`
struct SampleHeader {
    bool vector_mode = false;
    std::size_t cause_dim = 1;
    std::size_t effect_dim = 1;
    bool has_utility = false;
};

SampleHeader parse_sample_header(const std::vector<std::string>& fields,
                                 const std::string& name) {
    SampleHeader header;
    std::size_t pos = 0;
    if (pos < fields.size() && fields[pos] == "c") {
        ++pos;
    } else {
        header.vector_mode = true;
        header.cause_dim = 0;
        while (pos < fields.size() && fields[pos] == "c_" + std::to_string(header.cause_dim + 1)) {
            ++header.cause_dim;
            ++pos;
        }
        if (header.cause_dim == 0) {
            throw InputError(name + ": line 1: expected header 'c,e[,u]' or 'c_1..,e_1..[,u]'");
        }
    }
    if (!header.vector_mode) {
        if (pos >= fields.size() || fields[pos] != "e") {
            throw InputError(name + ": line 1: expected effect column 'e'");
        }
        ++pos;
    } else {
        header.effect_dim = 0;
        while (pos < fields.size() &&
               fields[pos] == "e_" + std::to_string(header.effect_dim + 1)) {
            ++header.effect_dim;
            ++pos;
        }
        if (header.effect_dim == 0) {
            throw InputError(name + ": line 1: expected effect columns 'e_1..'");
        }
    }
    if (pos < fields.size() && fields[pos] == "u") {
        header.has_utility = true;
        ++pos;
    }
    if (pos != fields.size()) {
        throw InputError(name + ": line 1: unexpected trailing header columns");
    }
    return header;
}

}  // namespace

ReportFormat parse_format(const std::string& name) {
    if (name == "text") return ReportFormat::text;
    if (name == "json") return ReportFormat::json;
    if (name == "csv") return ReportFormat::csv;
    throw ConfigError("unknown format '" + name + "' (expected text, json, or csv)");
}

SampleSet parse_samples_csv_text(const std::string& text, const std::string& name) {
    const auto lines = non_empty_lines(text);
    if (lines.empty()) throw InputError(name + ": empty file");
    const auto header = parse_sample_header(split_csv_line(lines[0]), name);
    const std::size_t expected =
        (header.vector_mode ? header.cause_dim + header.effect_dim : 2) +
        (header.has_utility ? 1 : 0);

    SampleSet data;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        if (trim(lines[ln]).empty()) {
            throw InputError(name + ": line " + std::to_string(ln + 1) + ": blank row");
        }
        const auto fields = split_csv_line(lines[ln]);
        if (fields.size() != expected) {
            throw InputError(name + ": line " + std::to_string(ln + 1) + ": expected " +
                             std::to_string(expected) + " fields, found " +
                             std::to_string(fields.size()));
        }
        std::size_t pos = 0;
        if (header.vector_mode) {
            std::vector<double> cause(header.cause_dim);
            for (auto& v : cause) v = parse_number(fields[pos++], name, ln + 1);
            std::vector<double> effect(header.effect_dim);
            for (auto& v : effect) v = parse_number(fields[pos++], name, ln + 1);
            data.cause_vectors.push_back(std::move(cause));
            data.effect_vectors.push_back(std::move(effect));
        } else {
            data.cause_labels.push_back(fields[pos++]);
            data.effect_labels.push_back(fields[pos++]);
        }
        if (header.has_utility) {
            data.utilities.push_back(parse_number(fields[pos++], name, ln + 1));
        }
    }
    if (data.size() == 0) throw InputError(name + ": no records");
    data.validate();
    return data;
}

SampleSet parse_samples_csv(const std::string& path) {
    return parse_samples_csv_text(read_file(path), path);
}

namespace {

struct Matrix {
    ValueSpace cause_space;
    ValueSpace effect_space;
    std::vector<std::vector<double>> values;
};

Matrix parse_matrix(const std::string& text, const std::string& name) {
    const auto lines = non_empty_lines(text);
    if (lines.size() < 2) throw InputError(name + ": matrix needs a header and at least one row");
    auto header = split_csv_line(lines[0]);
    if (header.size() < 2) throw InputError(name + ": line 1: no effect labels");
    std::vector<std::string> effect_labels(header.begin() + 1, header.end());
    std::vector<std::string> cause_labels;
    std::vector<std::vector<double>> values;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        const auto fields = split_csv_line(lines[ln]);
        if (fields.size() != effect_labels.size() + 1) {
            throw InputError(name + ": line " + std::to_string(ln + 1) + ": expected " +
                             std::to_string(effect_labels.size() + 1) + " fields, found " +
                             std::to_string(fields.size()));
        }
        cause_labels.push_back(fields[0]);
        std::vector<double> row(effect_labels.size());
        for (std::size_t i = 0; i < row.size(); ++i) {
            row[i] = parse_number(fields[i + 1], name, ln + 1);
        }
        values.push_back(std::move(row));
    }
    return Matrix{ValueSpace(std::move(cause_labels)), ValueSpace(std::move(effect_labels)),
                  std::move(values)};
}

}  // namespace

Cpt parse_cpt_csv_text(const std::string& text, CptKind kind, const std::string& name) {
    Matrix m = parse_matrix(text, name);
    for (std::size_t j = 0; j < m.values.size(); ++j) {
        double sum = 0.0;
        for (double v : m.values[j]) {
            if (v < 0.0 || v > 1.0) {
                throw InputError(name + ": probability out of [0,1] in row '" +
                                 m.cause_space.label(j) + "'");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-6) {
            throw InputError(name + ": row '" + m.cause_space.label(j) + "' sums to " +
                             std::to_string(sum) + ", expected 1");
        }
        for (double& v : m.values[j]) v /= sum;
    }
    return Cpt(m.cause_space, m.effect_space, std::move(m.values), kind);
}

Cpt parse_cpt_csv(const std::string& path, CptKind kind) {
    return parse_cpt_csv_text(read_file(path), kind, path);
}

UtilityTable parse_utility_csv_text(const std::string& text, const std::string& name) {
    Matrix m = parse_matrix(text, name);
    return UtilityTable(m.cause_space, m.effect_space, std::move(m.values));
}

UtilityTable parse_utility_csv(const std::string& path) {
    return parse_utility_csv_text(read_file(path), path);
}

std::string emit_samples_csv(const SampleSet& data) {
    data.validate();
    std::ostringstream out;
    out << std::setprecision(17);
    if (data.continuous()) {
        const std::size_t cd = data.cause_vectors.front().size();
        const std::size_t ed = data.effect_vectors.front().size();
        for (std::size_t i = 1; i <= cd; ++i) out << "c_" << i << ',';
        for (std::size_t i = 1; i <= ed; ++i) out << "e_" << i << (i == ed ? "" : ",");
        if (data.has_utilities()) out << ",u";
        out << '\n';
        for (std::size_t r = 0; r < data.size(); ++r) {
            for (double v : data.cause_vectors[r]) out << v << ',';
            for (std::size_t i = 0; i < ed; ++i) {
                out << data.effect_vectors[r][i] << (i + 1 == ed ? "" : ",");
            }
            if (data.has_utilities()) out << ',' << data.utilities[r];
            out << '\n';
        }
    } else {
        out << (data.has_utilities() ? "c,e,u" : "c,e") << '\n';
        for (std::size_t r = 0; r < data.size(); ++r) {
            out << data.cause_labels[r] << ',' << data.effect_labels[r];
            if (data.has_utilities()) out << ',' << data.utilities[r];
            out << '\n';
        }
    }
    return out.str();
}

std::string emit_matrix_csv(const ValueSpace& cause_space, const ValueSpace& effect_space,
                            const std::vector<std::vector<double>>& values) {
    std::ostringstream out;
    out << std::setprecision(17);
    for (const auto& l : effect_space.labels()) out << ',' << l;
    out << '\n';
    for (std::size_t j = 0; j < cause_space.size(); ++j) {
        out << cause_space.label(j);
        for (double v : values.at(j)) out << ',' << v;
        out << '\n';
    }
    return out.str();
}

namespace {

nlohmann::json partition_json(const Partition& part, const ValueSpace& space) {
    nlohmann::json classes = nlohmann::json::array();
    for (std::size_t c = 0; c < part.num_classes(); ++c) {
        nlohmann::json members = nlohmann::json::array();
        for (std::size_t idx : part.classes()[c]) members.push_back(space.label(idx));
        classes.push_back(members);
    }
    return classes;
}

void emit_partition_text(std::ostream& out, const std::string& title, const Partition& part,
                         const ValueSpace& space) {
    out << title << ":";
    for (std::size_t c = 0; c < part.num_classes(); ++c) {
        out << " {" << part.class_label(c, space) << "}";
    }
    out << '\n';
}

void emit_cpt_text(std::ostream& out, const Cpt& cpt) {
    out << std::setprecision(6);
    for (const auto& l : cpt.effect_space().labels()) out << '\t' << l;
    out << '\n';
    for (std::size_t j = 0; j < cpt.num_causes(); ++j) {
        out << cpt.cause_space().label(j);
        for (double v : cpt.row(j)) out << '\t' << v;
        out << '\n';
    }
}

}  // namespace

std::string emit_report(const AnalysisReport& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::json: {
            nlohmann::json doc;
            doc["cause_partition"] = partition_json(report.cause_partition, report.cause_space);
            doc["effect_partition"] =
                partition_json(report.effect_partition, report.effect_space);
            if (report.coarse_cpt) {
                const auto& cpt = *report.coarse_cpt;
                doc["coarse_cpt"] = {{"cause_labels", cpt.cause_space().labels()},
                                     {"effect_labels", cpt.effect_space().labels()},
                                     {"rows", cpt.rows()},
                                     {"kind", cpt.kind() == CptKind::interventional
                                                  ? "interventional"
                                                  : "observational"}};
            } else {
                doc["coarse_cpt"] = nullptr;
            }
            if (report.eu_profile) {
                doc["eu_profile"] = report.eu_profile->values;
                if (report.eu_profile->eta) doc["eta"] = *report.eu_profile->eta;
            } else {
                doc["eu_profile"] = nullptr;
            }
            return doc.dump(2);
        }
        case ReportFormat::csv: {
            std::ostringstream out;
            out << "cause_partition,";
            for (std::size_t c = 0; c < report.cause_partition.num_classes(); ++c) {
                out << (c ? ";" : "")
                    << report.cause_partition.class_label(c, report.cause_space);
            }
            out << "\neffect_partition,";
            for (std::size_t c = 0; c < report.effect_partition.num_classes(); ++c) {
                out << (c ? ";" : "")
                    << report.effect_partition.class_label(c, report.effect_space);
            }
            out << '\n';
            if (report.coarse_cpt) {
                out << emit_matrix_csv(report.coarse_cpt->cause_space(),
                                       report.coarse_cpt->effect_space(),
                                       report.coarse_cpt->rows());
            }
            if (report.eu_profile) {
                out << "eu_profile";
                for (double v : report.eu_profile->values) out << ',' << v;
                out << '\n';
                if (report.eu_profile->eta) out << "eta," << *report.eu_profile->eta << '\n';
            }
            return out.str();
        }
        case ReportFormat::text:
        default: {
            std::ostringstream out;
            emit_partition_text(out, "cause partition", report.cause_partition,
                                report.cause_space);
            emit_partition_text(out, "effect partition", report.effect_partition,
                                report.effect_space);
            if (report.coarse_cpt) {
                out << "coarse CPT ("
                    << (report.coarse_cpt->kind() == CptKind::interventional ? "interventional"
                                                                             : "observational")
                    << "):\n";
                emit_cpt_text(out, *report.coarse_cpt);
            }
            if (report.eu_profile) {
                out << "expected utilities:";
                out << std::setprecision(6);
                for (std::size_t j = 0; j < report.eu_profile->values.size(); ++j) {
                    out << ' ' << report.cause_space.label(j) << '='
                        << report.eu_profile->values[j];
                }
                out << '\n';
                if (report.eu_profile->eta) {
                    out << "eta = " << std::setprecision(6) << *report.eu_profile->eta << '\n';
                }
            }
            return out.str();
        }
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << content;
}

}  // namespace pcfl
