#include "infent/chain.hpp"

#include <cmath>
#include <cstdint>

#include <Eigen/LU>
#include <json.hpp>

namespace infent {

namespace {

using ojson = nlohmann::ordered_json;

constexpr std::size_t kMaxDenseWindow = 8;

void require_pair_block(const LinearOperator& b, const char* where) {
  if (b.rows() != 4 || b.cols() != 4) throw ArgumentError(std::string(where) + ": pair blocks must be 4x4");
}

void require_index(const PairIndex& k, const char* where) {
  if (k < 0) throw ArgumentError(std::string(where) + ": pair index must be nonnegative");
}

ojson block_to_json(const LinearOperator& b) {
  ojson arr = ojson::array();
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) arr.push_back(ojson::array({b(i, j).real(), b(i, j).imag()}));
  return arr;
}

LinearOperator block_from_json(const ojson& arr) {
  if (!arr.is_array() || arr.size() != 16) throw ArgumentError("chain json: a block needs 16 [re, im] entries");
  Matrix m(4, 4);
  for (std::size_t i = 0; i < 16; ++i) {
    const ojson& e = arr[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw ArgumentError("chain json: entries must be [re, im] number pairs");
    }
    m(static_cast<Eigen::Index>(i / 4), static_cast<Eigen::Index>(i % 4)) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  return LinearOperator(std::move(m), Dims{2, 2});
}

std::string map_to_json(const std::map<PairIndex, LinearOperator>& blocks) {
  ojson support = ojson::object();
  for (const auto& [k, b] : blocks) support[k.str()] = block_to_json(b);
  ojson doc;
  doc["support"] = std::move(support);
  return doc.dump();
}

std::map<PairIndex, LinearOperator> map_from_json(const std::string& text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ArgumentError(std::string("chain json: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("support") || !doc["support"].is_object()) {
    throw ArgumentError("chain json: expected an object with a \"support\" object");
  }
  std::map<PairIndex, LinearOperator> out;
  for (const auto& [key, value] : doc["support"].items()) {
    if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos) {
      throw ArgumentError("chain json: support keys must be nonnegative decimal integers");
    }
    out.insert_or_assign(PairIndex(key), block_from_json(value));
  }
  return out;
}

}  // namespace

Vector singlet_vector() {
  Vector s = Vector::Zero(4);
  s(1) = 1.0 / std::sqrt(2.0);
  s(2) = -1.0 / std::sqrt(2.0);
  return s;
}

LinearOperator singlet_density() { return LinearOperator::projector(singlet_vector(), Dims{2, 2}); }

ChainObservable ChainObservable::local(const PairIndex& k, const LinearOperator& block) {
  return ChainObservable{}.with(k, block);
}

ChainObservable ChainObservable::with(const PairIndex& k, const LinearOperator& block) const {
  require_index(k, "ChainObservable");
  require_pair_block(block, "ChainObservable");
  ChainObservable out = *this;
  const LinearOperator b = block.with_dims(Dims{2, 2});
  auto it = out.support_.find(k);
  if (it == out.support_.end()) {
    out.support_.emplace(k, b);
  } else {
    it->second = (it->second * b).with_dims(Dims{2, 2});
  }
  return out;
}

ChainObservable operator*(const ChainObservable& a, const ChainObservable& b) {
  ChainObservable out = a;
  for (const auto& [k, blk] : b.support_) out = out.with(k, blk);
  return out;
}

std::string ChainObservable::to_json() const { return map_to_json(support_); }

ChainObservable ChainObservable::from_json(const std::string& text) {
  ChainObservable out;
  for (auto& [k, b] : map_from_json(text)) out.support_.insert_or_assign(k, b);
  return out;
}

ChainState ChainState::with_override(const PairIndex& k, const LinearOperator& rho) const {
  require_index(k, "ChainState");
  require_pair_block(rho, "ChainState");
  require_density(rho, "ChainState override");
  ChainState out = *this;
  out.overrides_.insert_or_assign(k, rho.with_dims(Dims{2, 2}));
  return out;
}

std::string ChainState::to_json() const { return map_to_json(overrides_); }

ChainState ChainState::from_json(const std::string& text) {
  ChainState out;
  for (auto& [k, b] : map_from_json(text)) out = out.with_override(k, b);
  return out;
}

LinearOperator restrict(const ChainState& s, const PairIndex& k) {
  require_index(k, "restrict");
  auto it = s.overrides().find(k);
  return it == s.overrides().end() ? singlet_density() : it->second;
}

Complex expect(const ChainState& s, const ChainObservable& a) {
  // Pairs outside the observable's support contribute tr(rho_k) = 1.
  Complex acc = 1.0;
  for (const auto& [k, blk] : a.support()) acc *= (restrict(s, k).matrix() * blk.matrix()).trace();
  return acc;
}

ChainSplit split_even_odd(const ChainState& s) {
  if (!s.is_default()) throw UnsupportedError("split_even_odd: only the default singlet chain can be split");
  return ChainSplit{ChainState{}, ChainState{}};
}

PairIndex half_to_parent(const PairIndex& j, int parity) {
  if (parity != 0 && parity != 1) throw ArgumentError("half_to_parent: parity must be 0 or 1");
  require_index(j, "half_to_parent");
  return 2 * j + parity;
}

ChainObservable lift_from_half(const ChainObservable& a, int parity) {
  ChainObservable out;
  for (const auto& [j, blk] : a.support()) out = out.with(half_to_parent(j, parity), blk);
  return out;
}

Vector window_vector(std::size_t m) {
  if (m > kMaxDenseWindow) throw SizeError("window_vector: windows above 8 pairs are not built densely");
  Vector v = Vector::Ones(1);
  const Vector s = singlet_vector();
  for (std::size_t k = 0; k < m; ++k) {
    Vector next(v.size() * 4);
    for (Eigen::Index i = 0; i < v.size(); ++i) next.segment(i * 4, 4) = v(i) * s;
    v = std::move(next);
  }
  return v;
}

Complex window_expect(const ChainObservable& a, std::size_t m) {
  const Vector phi = window_vector(m);
  Vector out = phi;
  for (const auto& [k, blk] : a.support()) {
    if (k >= m) throw ArgumentError("window_expect: observable support exceeds the window");
    const auto pair = static_cast<Eigen::Index>(k.convert_to<std::uint64_t>());
    // index = (high * 4 + local) * low_size + low
    Eigen::Index low = 1;
    for (auto p = pair + 1; p < static_cast<Eigen::Index>(m); ++p) low *= 4;
    const Eigen::Index high = out.size() / (4 * low);
    Vector next(out.size());
    for (Eigen::Index h = 0; h < high; ++h)
      for (Eigen::Index l = 0; l < low; ++l) {
        Vector local(4);
        for (Eigen::Index r = 0; r < 4; ++r) local(r) = out((h * 4 + r) * low + l);
        const Vector mapped = blk.matrix() * local;
        for (Eigen::Index r = 0; r < 4; ++r) next((h * 4 + r) * low + l) = mapped(r);
      }
    out = std::move(next);
  }
  return phi.dot(out);
}

namespace {

// Qubits are ordered A0 B0 A1 B1 ...; Alice qubit of pair k is 2k.
bool is_alice_qubit(std::size_t q) { return q % 2 == 0; }

}  // namespace

CommutantReport window_commutant_pauli(std::size_t m) {
  if (m == 0 || m > 3) throw ArgumentError("window_commutant_pauli: window must have 1..3 pairs");
  const std::size_t n = 2 * m;
  CommutantReport rep;
  rep.bob_dimension = std::size_t{1} << (2 * m);
  bool all_bob = true;
  // Pauli strings as (x, z) bit masks; P and P' commute iff x.z' + z.x' is even.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> gens;
  for (std::size_t q = 0; q < n; ++q) {
    if (!is_alice_qubit(q)) continue;
    gens.emplace_back(1u << q, 0u);
    gens.emplace_back(0u, 1u << q);
  }
  std::uint32_t alice_mask = 0;
  for (std::size_t q = 0; q < n; ++q)
    if (is_alice_qubit(q)) alice_mask |= 1u << q;
  for (std::uint32_t x = 0; x < (1u << n); ++x)
    for (std::uint32_t z = 0; z < (1u << n); ++z) {
      bool commutes = true;
      for (const auto& [gx, gz] : gens) {
        if ((__builtin_popcount(x & gz) + __builtin_popcount(z & gx)) % 2 != 0) {
          commutes = false;
          break;
        }
      }
      if (commutes) {
        ++rep.dimension;
        if (((x | z) & alice_mask) != 0) all_bob = false;
      }
    }
  rep.equals_bob_algebra = all_bob && rep.dimension == rep.bob_dimension;
  return rep;
}

CommutantReport window_commutant_dense(std::size_t m) {
  if (m == 0 || m > 2) throw ArgumentError("window_commutant_dense: window must have 1 or 2 pairs");
  const std::size_t n = 2 * m;
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);

  auto single = [&](const LinearOperator& p, std::size_t qubit) {
    LinearOperator acc = LinearOperator::identity(1);
    for (std::size_t q = 0; q < n; ++q) acc = tensor(acc, q == qubit ? p : LinearOperator::identity(2));
    return acc.matrix();
  };

  std::vector<Matrix> gens;
  for (std::size_t q = 0; q < n; ++q) {
    if (!is_alice_qubit(q)) continue;
    gens.push_back(single(pauli_x(), q));
    gens.push_back(single(pauli_z(), q));
  }

  // Row-major vec: vec(G C) = (G (x) 1) vec C, vec(C G) = (1 (x) G^T) vec C.
  const Matrix id = Matrix::Identity(dim, dim);
  Matrix sys(static_cast<Eigen::Index>(gens.size()) * dim * dim, dim * dim);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const Matrix left = tensor(LinearOperator(gens[g]), LinearOperator(id)).matrix();
    const Matrix right = tensor(LinearOperator(id), LinearOperator(Matrix(gens[g].transpose()))).matrix();
    sys.middleRows(static_cast<Eigen::Index>(g) * dim * dim, dim * dim) = left - right;
  }
  Eigen::FullPivLU<Matrix> lu(sys);
  lu.setThreshold(1e-10);

  CommutantReport rep;
  rep.dimension = static_cast<std::size_t>(lu.dimensionOfKernel());
  rep.bob_dimension = std::size_t{1} << (2 * m);

  // Bob-only Pauli strings lie in the kernel; with equal dimension the spaces coincide.
  bool contained = true;
  const LinearOperator paulis[4] = {LinearOperator::identity(2), pauli_x(), pauli_y(), pauli_z()};
  for (std::size_t code = 0; code < rep.bob_dimension; ++code) {
    LinearOperator acc = LinearOperator::identity(1);
    std::size_t c = code;
    for (std::size_t q = 0; q < n; ++q) {
      if (is_alice_qubit(q)) {
        acc = tensor(acc, LinearOperator::identity(2));
      } else {
        acc = tensor(acc, paulis[c % 4]);
        c /= 4;
      }
    }
    Vector v(dim * dim);
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = 0; j < dim; ++j) v(i * dim + j) = acc.matrix()(i, j);
    if ((sys * v).norm() > tol::kSpectral) contained = false;
  }
  rep.equals_bob_algebra = contained && rep.dimension == rep.bob_dimension;
  return rep;
}

}  // namespace infent
