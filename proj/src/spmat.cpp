#include "sparseshare/spmat.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sparseshare/errors.hpp"
#include "sparseshare/rng.hpp"

namespace sparseshare {

namespace {

bool row_major_less(const Triplet& a, const Triplet& b) {
  return a.row != b.row ? a.row < b.row : a.col < b.col;
}

void require_same_shape(const SparseMatrix& a, const SparseMatrix& b, const char* op) {
  if (!(a.field() == b.field())) {
    throw std::invalid_argument(std::string(op) + ": field mismatch");
  }
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch");
  }
}

}  // namespace

SparseMatrix::SparseMatrix(PrimeField field, std::size_t rows, std::size_t cols,
                           std::vector<Triplet> entries)
    : field_(field), rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows_ == 0 || cols_ == 0) {
    throw std::invalid_argument("SparseMatrix: dimensions must be positive");
  }
  const std::uint32_t q = field_.modulus();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Triplet& t = entries_[i];
    if (t.row >= rows_ || t.col >= cols_) {
      throw std::invalid_argument("SparseMatrix: entry (" + std::to_string(t.row) + ", " +
                                  std::to_string(t.col) + ") out of bounds");
    }
    if (t.value == 0 || t.value >= q) {
      throw std::invalid_argument("SparseMatrix: stored value " + std::to_string(t.value) +
                                  " not in [1, q-1]");
    }
    if (i > 0 && !row_major_less(entries_[i - 1], t)) {
      throw std::invalid_argument("SparseMatrix: entries unsorted or duplicated at index " +
                                  std::to_string(i));
    }
  }
}

SparseMatrix::SparseMatrix(PrimeField field, std::size_t rows, std::size_t cols)
    : SparseMatrix(field, rows, cols, {}) {}

SparseMatrix SparseMatrix::from_triplets(PrimeField field, std::size_t rows,
                                         std::size_t cols, std::vector<Triplet> triplets) {
  std::stable_sort(triplets.begin(), triplets.end(), row_major_less);
  std::vector<Triplet> merged;
  merged.reserve(triplets.size());
  const std::uint32_t q = field.modulus();
  for (const Triplet& t : triplets) {
    const std::uint32_t v = t.value % q;
    if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col) {
      merged.back().value = field.raw_add(merged.back().value, v);
    } else {
      merged.push_back({t.row, t.col, v});
    }
  }
  std::erase_if(merged, [](const Triplet& t) { return t.value == 0; });
  return SparseMatrix(field, rows, cols, std::move(merged));
}

SparseMatrix SparseMatrix::from_dense(PrimeField field, std::size_t rows, std::size_t cols,
                                      std::span<const std::int64_t> values) {
  if (values.size() != rows * cols) {
    throw std::invalid_argument("from_dense: expected " + std::to_string(rows * cols) +
                                " values, got " + std::to_string(values.size()));
  }
  std::vector<Triplet> entries;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::uint32_t v = field.element(values[r * cols + c]).value;
      if (v != 0) {
        entries.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), v});
      }
    }
  }
  return SparseMatrix(field, rows, cols, std::move(entries));
}

SparseMatrix SparseMatrix::identity(PrimeField field, std::size_t n) {
  std::vector<Triplet> entries;
  entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i), 1});
  }
  return SparseMatrix(field, n, n, std::move(entries));
}

std::vector<std::size_t> SparseMatrix::row_offsets() const {
  std::vector<std::size_t> offsets(rows_ + 1, 0);
  for (const Triplet& t : entries_) ++offsets[t.row + 1];
  for (std::size_t r = 0; r < rows_; ++r) offsets[r + 1] += offsets[r];
  return offsets;
}

std::uint32_t SparseMatrix::at(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) throw std::out_of_range("SparseMatrix::at");
  const Triplet key{static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), 0};
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key, row_major_less);
  if (it != entries_.end() && it->row == r && it->col == c) return it->value;
  return 0;
}

std::vector<std::uint32_t> SparseMatrix::to_dense() const {
  std::vector<std::uint32_t> dense(rows_ * cols_, 0);
  for (const Triplet& t : entries_) dense[t.row * cols_ + t.col] = t.value;
  return dense;
}

SourceModel::SourceModel(PrimeField f, double s) : field(f), sparsity(s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw std::invalid_argument("SourceModel: sparsity must lie in [0, 1]");
  }
}

SparseMatrix sp_mul(const SparseMatrix& a, const SparseMatrix& b) {
  if (!(a.field() == b.field())) throw std::invalid_argument("sp_mul: field mismatch");
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("sp_mul: inner dimensions differ (" +
                                std::to_string(a.cols()) + " vs " +
                                std::to_string(b.rows()) + ")");
  }
  const PrimeField& field = a.field();
  const std::uint64_t q = field.modulus();
  const auto a_entries = a.entries();
  const auto b_entries = b.entries();
  const auto b_rows = b.row_offsets();

  // Dense accumulator per output row plus the list of touched columns.
  std::vector<std::uint64_t> acc(b.cols(), 0);
  std::vector<char> touched(b.cols(), 0);
  std::vector<std::uint32_t> touched_cols;
  std::vector<Triplet> out;

  std::size_t i = 0;
  while (i < a_entries.size()) {
    const std::uint32_t row = a_entries[i].row;
    for (; i < a_entries.size() && a_entries[i].row == row; ++i) {
      const std::uint64_t av = a_entries[i].value;
      const std::uint32_t k = a_entries[i].col;
      for (std::size_t j = b_rows[k]; j < b_rows[k + 1]; ++j) {
        const std::uint32_t c = b_entries[j].col;
        acc[c] = (acc[c] + av * b_entries[j].value) % q;
        if (!touched[c]) {
          touched[c] = 1;
          touched_cols.push_back(c);
        }
      }
    }
    std::sort(touched_cols.begin(), touched_cols.end());
    for (std::uint32_t c : touched_cols) {
      if (acc[c] != 0) out.push_back({row, c, static_cast<std::uint32_t>(acc[c])});
      acc[c] = 0;
      touched[c] = 0;
    }
    touched_cols.clear();
  }
  return SparseMatrix(field, a.rows(), b.cols(), std::move(out));
}

SparseMatrix add_scaled(const SparseMatrix& a, const SparseMatrix& b, std::uint32_t factor) {
  require_same_shape(a, b, "add_scaled");
  const PrimeField& field = a.field();
  factor %= field.modulus();
  const auto ea = a.entries();
  const auto eb = b.entries();
  std::vector<Triplet> out;
  out.reserve(ea.size() + eb.size());
  std::size_t i = 0, j = 0;
  while (i < ea.size() || j < eb.size()) {
    if (j == eb.size() || (i < ea.size() && row_major_less(ea[i], eb[j]))) {
      out.push_back(ea[i++]);
    } else if (i == ea.size() || row_major_less(eb[j], ea[i])) {
      const std::uint32_t v = field.raw_mul(eb[j].value, factor);
      if (v != 0) out.push_back({eb[j].row, eb[j].col, v});
      ++j;
    } else {
      const std::uint32_t v = field.raw_add(ea[i].value, field.raw_mul(eb[j].value, factor));
      if (v != 0) out.push_back({ea[i].row, ea[i].col, v});
      ++i;
      ++j;
    }
  }
  return SparseMatrix(field, a.rows(), a.cols(), std::move(out));
}

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b) { return add_scaled(a, b, 1); }

SparseMatrix sub(const SparseMatrix& a, const SparseMatrix& b) {
  return add_scaled(a, b, a.field().modulus() - 1);
}

SparseMatrix scale(const SparseMatrix& a, std::uint32_t factor) {
  const PrimeField& field = a.field();
  factor %= field.modulus();
  if (factor == 0) return SparseMatrix(field, a.rows(), a.cols());
  std::vector<Triplet> out(a.entries().begin(), a.entries().end());
  for (Triplet& t : out) t.value = field.raw_mul(t.value, factor);
  return SparseMatrix(field, a.rows(), a.cols(), std::move(out));
}

SparseMatrix linear_combination(std::span<const SparseMatrix> terms,
                                std::span<const std::uint32_t> coeffs) {
  if (terms.empty() || terms.size() != coeffs.size()) {
    throw std::invalid_argument("linear_combination: need matching non-empty inputs");
  }
  SparseMatrix result = scale(terms[0], coeffs[0]);
  for (std::size_t i = 1; i < terms.size(); ++i) {
    result = add_scaled(result, terms[i], coeffs[i]);
  }
  return result;
}

SparseMatrix sample_source_matrix(const SourceModel& model, std::size_t rows,
                                  std::size_t cols, std::uint64_t seed) {
  const std::uint32_t q = model.field.modulus();
  const double s = model.sparsity;
  Xoshiro256ss rng(seed);
  std::vector<Triplet> entries;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double u = rng.uniform();
      if (u < s) continue;
      // Nonzero values 1..q-1 each carry (1-s)/(q-1) of the mass.
      auto k = static_cast<std::uint64_t>((u - s) / (1.0 - s) * (q - 1));
      k = std::min<std::uint64_t>(k, q - 2);
      entries.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c),
                         static_cast<std::uint32_t>(k + 1)});
    }
  }
  return SparseMatrix(model.field, rows, cols, std::move(entries));
}

double empirical_sparsity(const SparseMatrix& m) {
  const double total = static_cast<double>(m.rows()) * static_cast<double>(m.cols());
  return (total - static_cast<double>(m.nnz())) / total;
}

std::uint64_t multiply_cost(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply_cost: dimension mismatch");
  const auto offsets = b.row_offsets();
  std::uint64_t cost = 0;
  for (const Triplet& t : a.entries()) cost += offsets[t.col + 1] - offsets[t.col];
  return cost;
}

void write_matrix(const SparseMatrix& m, std::ostream& out) {
  out << "SPFQ 1\n"
      << m.field().modulus() << ' ' << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  for (const Triplet& t : m.entries()) {
    out << t.row << ' ' << t.col << ' ' << t.value << '\n';
  }
}

void write_matrix(const SparseMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_matrix(m, out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

namespace {

// Parses one line of unsigned integers; rejects anything else on the line.
std::vector<std::uint64_t> parse_uints(const std::string& line, std::size_t expected,
                                       std::size_t line_no) {
  std::vector<std::uint64_t> values;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    if (pos >= line.size()) break;
    if (line[pos] < '0' || line[pos] > '9') {
      throw ParseError("SPFQ line " + std::to_string(line_no) + ": unexpected character");
    }
    std::uint64_t v = 0;
    while (pos < line.size() && line[pos] >= '0' && line[pos] <= '9') {
      v = v * 10 + static_cast<std::uint64_t>(line[pos] - '0');
      if (v > (1ULL << 40U)) {
        throw ParseError("SPFQ line " + std::to_string(line_no) + ": number too large");
      }
      ++pos;
    }
    values.push_back(v);
  }
  if (values.size() != expected) {
    throw ParseError("SPFQ line " + std::to_string(line_no) + ": expected " +
                     std::to_string(expected) + " fields, got " +
                     std::to_string(values.size()));
  }
  return values;
}

}  // namespace

SparseMatrix read_matrix(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "SPFQ 1") {
    throw ParseError("SPFQ: missing 'SPFQ 1' header");
  }
  if (!std::getline(in, line)) throw ParseError("SPFQ: missing size line");
  const auto header = parse_uints(line, 4, 2);
  const std::uint64_t q = header[0], rows = header[1], cols = header[2], nnz = header[3];
  if (q < 2 || q >= (1ULL << 31U) || !is_prime(q)) {
    throw ParseError("SPFQ: modulus " + std::to_string(q) + " is not a supported prime");
  }
  if (rows == 0 || cols == 0) throw ParseError("SPFQ: dimensions must be positive");
  if (nnz > rows * cols) throw ParseError("SPFQ: nnz exceeds rows*cols");

  const PrimeField field(static_cast<std::uint32_t>(q));
  std::vector<Triplet> entries;
  entries.reserve(nnz);
  for (std::uint64_t i = 0; i < nnz; ++i) {
    if (!std::getline(in, line)) {
      throw ParseError("SPFQ: expected " + std::to_string(nnz) + " entries, got " +
                       std::to_string(i));
    }
    const auto f = parse_uints(line, 3, i + 3);
    if (f[0] >= rows || f[1] >= cols) {
      throw ParseError("SPFQ line " + std::to_string(i + 3) + ": index out of range");
    }
    if (f[2] == 0 || f[2] >= q) {
      throw ParseError("SPFQ line " + std::to_string(i + 3) + ": value " +
                       std::to_string(f[2]) + " not in [1, q-1]");
    }
    const Triplet t{static_cast<std::uint32_t>(f[0]), static_cast<std::uint32_t>(f[1]),
                    static_cast<std::uint32_t>(f[2])};
    if (!entries.empty() && !row_major_less(entries.back(), t)) {
      throw ParseError("SPFQ line " + std::to_string(i + 3) +
                       ": entries unsorted or duplicated");
    }
    entries.push_back(t);
  }
  while (std::getline(in, line)) {
    if (!line.empty()) throw ParseError("SPFQ: trailing content after entries");
  }
  return SparseMatrix(field, rows, cols, std::move(entries));
}

SparseMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_matrix(in);
}

}  // namespace sparseshare
