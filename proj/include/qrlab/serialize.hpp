#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qrlab/models.hpp"
#include "qrlab/scaling.hpp"

namespace qrlab {

/// ModelSpec plus the Fock cutoff, as stored in the key-value config document.
struct ModelDocument {
    ModelSpec spec;
    int cutoff = -1; // -1 = "auto"
};

/// Key-value document, one "key = value" per line, '#' comments.
/// Keys: n_spins, tunneling, boson_freq, coupling, ising_edges, bias,
/// ising_axis, cutoff. Scalars given for tunneling/bias broadcast to all
/// spins; edges are written as (i,j,eps) groups.
ModelDocument read_model_document(std::istream& in);
ModelDocument read_model_document_file(const std::string& path);
void write_model_document(std::ostream& out, const ModelDocument& doc);

/// Tabular result: named columns over double rows, with a provenance digest
/// emitted as a comment line (CSV) or a "digest" field (JSON).
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::string digest;
};

/// Deterministic CSV: digest comment, header, then rows at 17 significant
/// digits with '\n' line endings.
void write_csv(std::ostream& out, const Table& t);

/// JSON object {digest, rows:[{column: value}...]}; field names match the
/// CSV header.
void write_json(std::ostream& out, const Table& t);

Table to_table(const ScalingCurve& curve);

} // namespace qrlab
