#include "sparseshare/sharing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sparseshare/errors.hpp"
#include "sparseshare/rng.hpp"

namespace sparseshare {

namespace {

// k-th element (0-based, ascending) of {0..q-1} minus the sorted `excluded`.
std::uint32_t kth_remaining(std::uint32_t k, std::span<const std::uint32_t> excluded) {
  std::uint32_t v = k;
  for (std::uint32_t e : excluded) {
    if (e <= v) ++v;
    else break;
  }
  return v;
}

}  // namespace

SparseMatrix sample_padding_special(const SparseMatrix& a, double p1,
                                    std::span<const std::uint32_t> kappa,
                                    std::span<const double> special_mass,
                                    std::uint64_t seed) {
  const PrimeField& field = a.field();
  const std::uint32_t q = field.modulus();
  const std::size_t count = kappa.size();
  if (count != special_mass.size()) {
    throw std::invalid_argument("sample_padding_special: kappa/mass length mismatch");
  }
  if (count >= q) throw std::invalid_argument("sample_padding_special: too many special values");
  {
    std::vector<std::uint32_t> k(kappa.begin(), kappa.end());
    for (auto& x : k) x %= q;
    std::sort(k.begin(), k.end());
    if (std::adjacent_find(k.begin(), k.end()) != k.end()) {
      throw std::invalid_argument("sample_padding_special: coefficients not distinct");
    }
  }
  double special_total = 0.0;
  for (double m : special_mass) special_total += m;
  const double rest_mass = std::max(0.0, (1.0 - special_total) / (q - count));
  const double p1_inv = (1.0 - p1) / (q - 1);

  // Special values for each nonzero a, in category order, plus a sorted copy.
  std::vector<std::uint32_t> specials(static_cast<std::size_t>(q) * count);
  std::vector<std::uint32_t> sorted(static_cast<std::size_t>(q) * count);
  for (std::uint32_t v = 1; v < q; ++v) {
    const std::uint32_t minus_v = field.raw_neg(v);
    for (std::size_t j = 0; j < count; ++j) {
      specials[v * count + j] = field.raw_mul(minus_v, kappa[j] % q);
    }
    std::copy_n(specials.begin() + v * count, count, sorted.begin() + v * count);
    std::sort(sorted.begin() + v * count, sorted.begin() + (v + 1) * count);
  }

  const auto dense_a = a.to_dense();
  Xoshiro256ss rng(seed);
  std::vector<Triplet> out;
  for (std::size_t row = 0; row < a.rows(); ++row) {
    for (std::size_t col = 0; col < a.cols(); ++col) {
      const std::uint32_t av = dense_a[row * a.cols() + col];
      const double u = rng.uniform();
      std::uint32_t r = 0;
      if (av == 0) {
        if (u >= p1) {
          auto k = p1_inv > 0.0 ? static_cast<std::uint64_t>((u - p1) / p1_inv) : q - 2;
          r = static_cast<std::uint32_t>(std::min<std::uint64_t>(k, q - 2) + 1);
        }
      } else {
        const std::uint32_t* sp = &specials[av * count];
        double cum = 0.0;
        bool picked = false;
        for (std::size_t j = 0; j < count; ++j) {
          cum += special_mass[j];
          if (u < cum) {
            r = sp[j];
            picked = true;
            break;
          }
        }
        if (!picked) {
          if (rest_mass > 0.0) {
            auto k = static_cast<std::uint64_t>((u - cum) / rest_mass);
            k = std::min<std::uint64_t>(k, q - count - 1);
            r = kth_remaining(static_cast<std::uint32_t>(k),
                              std::span(&sorted[av * count], count));
          } else {
            // Rounding put u past a total mass of one; take the last special
            // value that carries mass.
            for (std::size_t j = count; j-- > 0;) {
              if (special_mass[j] > 0.0) {
                r = sp[j];
                break;
              }
            }
          }
        }
      }
      if (r != 0) {
        out.push_back({static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(col), r});
      }
    }
  }
  return SparseMatrix(field, a.rows(), a.cols(), std::move(out));
}

SparseMatrix sample_padding(const SparseMatrix& a, const SymmetricSharePMF& pmf,
                            const ShareParams& params, std::uint64_t seed) {
  if (pmf.n() != params.n()) throw std::invalid_argument("sample_padding: pmf/params n mismatch");
  if (!(a.field() == pmf.field()) || !(params.field() == pmf.field())) {
    throw std::invalid_argument("sample_padding: field mismatch");
  }
  if (pmf.n() >= pmf.q()) throw std::invalid_argument("sample_padding: need n < q");
  std::vector<std::uint32_t> kappa;
  for (const FieldElement& alpha : params.alphas()) {
    kappa.push_back(pmf.field().raw_inverse(alpha.value));
  }
  const std::vector<double> mass(pmf.n(), pmf.p_star());
  return sample_padding_special(a, pmf.p1(), kappa, mass, seed);
}

SparseMatrix sample_padding_asymmetric(const SparseMatrix& a, const AsymmetricSharePMF& pmf,
                                       std::uint64_t seed) {
  if (!(a.field() == pmf.field())) {
    throw std::invalid_argument("sample_padding_asymmetric: field mismatch");
  }
  const std::uint32_t kappa[] = {0, 1};
  const double mass[] = {pmf.p2(), pmf.p3()};
  return sample_padding_special(a, pmf.p1(), kappa, mass, seed);
}

ShareSet make_shares(const SparseMatrix& a, const SparseMatrix& r, const ShareParams& params) {
  if (!(a.field() == r.field()) || !(a.field() == params.field())) {
    throw std::invalid_argument("make_shares: field mismatch");
  }
  if (a.rows() != r.rows() || a.cols() != r.cols()) {
    throw std::invalid_argument("make_shares: dimension mismatch");
  }
  std::vector<SparseMatrix> shares;
  shares.reserve(params.n());
  for (const FieldElement& alpha : params.alphas()) {
    shares.push_back(add_scaled(a, r, alpha.value));
  }
  return ShareSet{params, std::move(shares), std::nullopt, std::nullopt};
}

ShareSet encode(const SparseMatrix& a, const SymmetricSharePMF& pmf, const ShareParams& params,
                std::uint64_t seed) {
  ShareSet set = make_shares(a, sample_padding(a, pmf, params, seed), params);
  set.pmf = pmf;
  set.seed = seed;
  return set;
}

ProductEvaluation evaluate_task(const ShareSet& share_a, const ShareSet& share_b,
                                std::size_t i) {
  if (i >= share_a.shares.size() || i >= share_b.shares.size()) {
    throw std::out_of_range("evaluate_task: share index");
  }
  if (share_a.params.alpha(i) != share_b.params.alpha(i)) {
    throw std::invalid_argument("evaluate_task: A and B shares use different points");
  }
  return {share_a.params.alpha(i), sp_mul(share_a.shares[i], share_b.shares[i])};
}

SparseMatrix reconstruct_product(std::span<const ProductEvaluation> evals, bool cross_check) {
  if (evals.size() < 3) {
    throw std::invalid_argument("reconstruct_product: need at least 3 evaluations, got " +
                                std::to_string(evals.size()));
  }
  std::vector<const ProductEvaluation*> sorted;
  for (const auto& e : evals) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(), [](auto* x, auto* y) {
    return x->alpha.value < y->alpha.value;
  });
  const PrimeField& field = sorted.front()->h.field();
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& e = *sorted[i];
    if (!field.contains(e.alpha) || !(e.h.field() == field)) {
      throw std::invalid_argument("reconstruct_product: field mismatch");
    }
    if (e.alpha.value == 0) throw std::invalid_argument("reconstruct_product: alpha = 0");
    if (e.h.rows() != sorted.front()->h.rows() || e.h.cols() != sorted.front()->h.cols()) {
      throw std::invalid_argument("reconstruct_product: inconsistent dimensions");
    }
    if (i > 0 && sorted[i - 1]->alpha.value == e.alpha.value) {
      throw std::invalid_argument("reconstruct_product: duplicate evaluation point " +
                                  std::to_string(e.alpha.value));
    }
  }

  // Lagrange basis of the first three points, evaluated at x.
  const std::uint32_t xs[3] = {sorted[0]->alpha.value, sorted[1]->alpha.value,
                               sorted[2]->alpha.value};
  auto basis_at = [&](std::uint32_t x) {
    std::vector<std::uint32_t> w(3);
    for (int i = 0; i < 3; ++i) {
      std::uint32_t num = 1, den = 1;
      for (int j = 0; j < 3; ++j) {
        if (j == i) continue;
        num = field.raw_mul(num, field.raw_sub(x, xs[j]));
        den = field.raw_mul(den, field.raw_sub(xs[i], xs[j]));
      }
      w[i] = field.raw_mul(num, field.raw_inverse(den));
    }
    return w;
  };
  const std::vector<SparseMatrix> base = {sorted[0]->h, sorted[1]->h, sorted[2]->h};
  SparseMatrix c = linear_combination(base, basis_at(0));

  if (cross_check) {
    for (std::size_t i = 3; i < sorted.size(); ++i) {
      const SparseMatrix predicted = linear_combination(base, basis_at(sorted[i]->alpha.value));
      if (!(predicted == sorted[i]->h)) {
        throw DecodeError("evaluation at alpha = " + std::to_string(sorted[i]->alpha.value) +
                          " is inconsistent with the interpolated product polynomial");
      }
    }
  }
  return c;
}

FourTaskResult four_task_scheme(const SparseMatrix& a, const SparseMatrix& b,
                                const SparseMatrix& r, const SparseMatrix& s) {
  const SparseMatrix a_r = add(a, r);
  const SparseMatrix b_s = add(b, s);
  FourTaskResult out{sp_mul(a_r, b_s), sp_mul(a_r, s), sp_mul(r, b_s), sp_mul(r, s),
                     SparseMatrix(a.field(), a.rows(), b.cols())};
  out.c = add(sub(sub(out.t1, out.t2), out.t3), out.t4);
  return out;
}

ThreeTaskResult three_task_scheme(const SparseMatrix& a, const SparseMatrix& b,
                                  const SparseMatrix& r, const SparseMatrix& s) {
  const PrimeField& field = a.field();
  if (field.modulus() < 3) throw std::invalid_argument("three_task_scheme: needs q >= 3");
  const std::uint32_t half = field.raw_inverse(2);
  ThreeTaskResult out{sp_mul(add(a, r), add(b, s)), sp_mul(add_scaled(a, r, half), s),
                      sp_mul(r, add_scaled(b, s, half)),
                      SparseMatrix(field, a.rows(), b.cols())};
  out.c = sub(sub(out.t1, out.t2), out.t3);
  return out;
}

namespace {

constexpr const char* kManifestName = "manifest.txt";

std::string share_file(std::size_t i) { return "share_" + std::to_string(i + 1) + ".spfq"; }

std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

void write_share_set(const ShareSet& set, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / kManifestName, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest in " + dir.string());
  out << "SPFQ-SHARES 1\n";
  out << "q " << set.params.field().modulus() << '\n';
  out << "n " << set.params.n() << '\n';
  out << "rows " << set.rows() << '\n';
  out << "cols " << set.cols() << '\n';
  out << "alphas";
  for (const FieldElement& a : set.params.alphas()) out << ' ' << a.value;
  out << '\n';
  out << "seed " << (set.seed ? std::to_string(*set.seed) : "none") << '\n';
  if (set.pmf) {
    out << "p1 " << format_double(set.pmf->p1()) << '\n';
    out << "p_star " << format_double(set.pmf->p_star()) << '\n';
  }
  out << "files";
  for (std::size_t i = 0; i < set.shares.size(); ++i) out << ' ' << share_file(i);
  out << '\n';
  for (std::size_t i = 0; i < set.shares.size(); ++i) {
    write_matrix(set.shares[i], dir / share_file(i));
  }
}

ShareSet read_share_set(const std::filesystem::path& dir) {
  std::ifstream in(dir / kManifestName, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + (dir / kManifestName).string());
  std::string line;
  if (!std::getline(in, line) || line != "SPFQ-SHARES 1") {
    throw ParseError("manifest: missing 'SPFQ-SHARES 1' header");
  }
  std::map<std::string, std::vector<std::string>> fields;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key, word;
    ls >> key;
    auto& values = fields[key];
    while (ls >> word) values.push_back(word);
  }
  auto one = [&](const std::string& key) -> const std::string& {
    auto it = fields.find(key);
    if (it == fields.end() || it->second.size() != 1) {
      throw ParseError("manifest: missing or malformed '" + key + "'");
    }
    return it->second.front();
  };
  try {
    const auto q = static_cast<std::uint32_t>(std::stoul(one("q")));
    const auto n = static_cast<std::uint32_t>(std::stoul(one("n")));
    const PrimeField field(q);
    const auto& alpha_words = fields["alphas"];
    const auto& files = fields["files"];
    if (alpha_words.size() != n || files.size() != n) {
      throw ParseError("manifest: alphas/files do not list n entries");
    }
    std::vector<FieldElement> alphas;
    for (const auto& w : alpha_words) alphas.push_back(field.element(std::stoll(w)));
    ShareSet set{ShareParams(field, std::move(alphas)), {}, std::nullopt, std::nullopt};
    if (one("seed") != "none") set.seed = std::stoull(one("seed"));
    if (fields.count("p1") && fields.count("p_star") && n >= 2) {
      set.pmf = SymmetricSharePMF(field, n, std::stod(one("p1")), std::stod(one("p_star")));
    }
    const auto rows = std::stoull(one("rows"));
    const auto cols = std::stoull(one("cols"));
    for (const auto& f : files) {
      SparseMatrix m = read_matrix(dir / f);
      if (!(m.field() == field) || m.rows() != rows || m.cols() != cols) {
        throw ParseError("manifest: share file " + f + " does not match manifest shape");
      }
      set.shares.push_back(std::move(m));
    }
    return set;
  } catch (const std::logic_error& e) {
    // stoul/stod failures and invalid field parameters
    throw ParseError(std::string("manifest: ") + e.what());
  }
}

}  // namespace sparseshare
