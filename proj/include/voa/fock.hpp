#ifndef VOA_FOCK_HPP
#define VOA_FOCK_HPP

#include "voa/exactalg.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace voa {

enum class BaseKind : std::uint8_t { Vacuum, Exp, Twisted };

/// Which module a State lives in. For Exp the components lam[i-1] = <lambda, h^[i]>.
struct ModuleKind {
  BaseKind kind = BaseKind::Vacuum;
  int rank = 1;
  std::vector<PolyQ> lam;

  bool twisted() const { return kind == BaseKind::Twisted; }
  friend bool operator==(const ModuleKind &a, const ModuleKind &b) {
    return a.kind == b.kind && a.rank == b.rank && a.lam == b.lam;
  }
};
using ModulePtr = std::shared_ptr<const ModuleKind>;

ModulePtr vacuumModule(int rank);
/// e^lambda with symbolic components lam_1..lam_rank.
ModulePtr expModule(int rank);
ModulePtr expModule(std::vector<PolyQ> lam);
ModulePtr twistedModule(int rank);
bool sameModule(const ModulePtr &a, const ModulePtr &b);

/// h^[gen](-deg2/2); deg2 is even on untwisted modules and odd on the twisted one.
struct CreationOp {
  std::uint8_t gen;
  std::int16_t deg2;
  friend bool operator==(const CreationOp &a, const CreationOp &b) { return a.gen == b.gen && a.deg2 == b.deg2; }
  friend bool operator<(const CreationOp &a, const CreationOp &b) {
    return a.gen != b.gen ? a.gen < b.gen : a.deg2 < b.deg2;
  }
};

struct Monomial {
  std::vector<CreationOp> ops; // sorted by (gen, deg)

  Monomial() = default;
  explicit Monomial(std::vector<CreationOp> o);
  int deg2() const; // doubled total degree
  std::size_t size() const { return ops.size(); }
  Monomial with(CreationOp op) const;
  int count(CreationOp op) const;
  Monomial without(CreationOp op) const; // removes one copy
  friend bool operator==(const Monomial &a, const Monomial &b) { return a.ops == b.ops; }
  friend bool operator<(const Monomial &a, const Monomial &b) { return a.ops < b.ops; }
};

/// Sparse combination of monomials applied to the base vector of one module.
class State {
public:
  using Terms = std::map<Monomial, PolyQ>;

  State() : mod_(vacuumModule(1)) {}
  explicit State(ModulePtr m) : mod_(std::move(m)) {}
  State(ModulePtr m, const Monomial &mono, const PolyQ &c);
  /// The base vector: vac, e^lambda or vac_tw.
  static State base(const ModulePtr &m);

  const ModulePtr &module() const { return mod_; }
  const Terms &terms() const { return t_; }
  bool isZero() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }
  PolyQ coeff(const Monomial &m) const;

  State &add(const Monomial &m, const PolyQ &c);
  State &operator+=(const State &o);
  State &operator-=(const State &o);
  State &addScaled(const State &o, const PolyQ &c);
  State operator*(const PolyQ &c) const;
  State operator-() const { return *this * PolyQ(-1); }
  friend State operator+(State a, const State &b) { return a += b; }
  friend State operator-(State a, const State &b) { return a -= b; }
  friend State operator*(const PolyQ &c, const State &s) { return s * c; }
  friend bool operator==(const State &a, const State &b);
  friend bool operator!=(const State &a, const State &b) { return !(a == b); }

  State subst(const std::map<VarId, PolyQ> &values) const;
  /// Text form, e.g. 3/2*h[1](-2)^2*h[2](-1)|0>.
  std::string str() const;

private:
  ModulePtr mod_;
  Terms t_;
};

using VAElement = State;

/// Weight of the base vector: 0, <lambda,lambda>/2, or rank/16.
PolyQ baseWeight(const ModuleKind &m);
/// Doubled creation degree of a homogeneous state; throws if inhomogeneous.
int creationDeg2(const State &s);
/// Full weight; throws listing the distinct degrees if inhomogeneous.
PolyQ weight(const State &s);
/// Integer weight of a homogeneous vacuum-module element.
int elementWeight(const VAElement &a);
/// Splits a state into homogeneous components keyed by doubled creation degree.
std::map<int, State> homogeneousParts(const State &s);

State theta(const State &s);
State projectPlusMinus(const State &s, int sign);
/// Bitmask of generator indices (bit i-1 for h^[i]) occurring an odd number of times.
std::uint32_t parityPattern(const Monomial &m);
std::string patternStr(std::uint32_t p);

// Named generators in the vacuum module of the given rank.
VAElement vacuum(int rank);
VAElement heis(int rank, int i, int m = 1); // h^[i](-m)vac
VAElement omega(int rank, int i);
VAElement omegaTotal(int rank);
VAElement harH(int rank, int i);
VAElement harJ(int rank, int i);
VAElement S(int rank, int i, int j, int r, int s);
VAElement Eu(int rank, int i, int j);
VAElement Et(int rank, int i, int j);
VAElement Lambda(int rank, int i, int j);
/// Dispatch by name: "omega_i", "H_i", "J_i", "S(i,j;r,s)", "omega", "Eu(i,j)", "Et(i,j)", "Lambda(i,j)".
VAElement generator(const std::string &name, int rank);

std::ostream &operator<<(std::ostream &os, const State &s);

} // namespace voa

#endif
