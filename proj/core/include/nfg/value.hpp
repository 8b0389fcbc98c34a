#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace nfg {

using NodeId = std::string;
using Vec = std::vector<double>;

// A node value: an index into a finite space, or a point in a bounded box.
using Value = std::variant<int, Vec>;

// A (possibly partial) assignment of values to nodes.
using Instantiation = std::map<NodeId, Value>;

struct NetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool holds_index(const Value& v) { return std::holds_alternative<int>(v); }

inline int as_index(const Value& v) {
  if (!std::holds_alternative<int>(v)) throw NetError("value is not discrete");
  return std::get<int>(v);
}

inline const Vec& as_vec(const Value& v) {
  if (!std::holds_alternative<Vec>(v)) throw NetError("value is not continuous");
  return std::get<Vec>(v);
}

// Convenience for one-dimensional continuous values.
inline double as_scalar(const Value& v) {
  const Vec& x = as_vec(v);
  if (x.size() != 1) throw NetError("value is not a scalar");
  return x[0];
}

inline Value scalar_value(double x) { return Value(Vec{x}); }

std::string value_to_string(const Value& v);

// Either a finite enumerated space {0, ..., n-1} or an axis-aligned box.
class VariableSpace {
 public:
  static VariableSpace discrete(int cardinality);
  static VariableSpace box(Vec lower, Vec upper);
  static VariableSpace interval(double lo, double hi) { return box({lo}, {hi}); }

  bool is_discrete() const { return discrete_; }
  int cardinality() const;
  int dimension() const;
  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }

  bool contains(const Value& v) const;
  std::string describe() const;

 private:
  VariableSpace() = default;
  bool discrete_ = true;
  int cardinality_ = 0;
  Vec lower_, upper_;
};

}  // namespace nfg
