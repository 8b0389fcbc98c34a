#include "nfg/value.hpp"

#include <cmath>
#include <sstream>

namespace nfg {

std::string value_to_string(const Value& v) {
  std::ostringstream os;
  if (holds_index(v)) {
    os << std::get<int>(v);
  } else {
    const Vec& x = std::get<Vec>(v);
    os << "[";
    for (size_t i = 0; i < x.size(); ++i) {
      if (i) os << ",";
      os << x[i];
    }
    os << "]";
  }
  return os.str();
}

VariableSpace VariableSpace::discrete(int cardinality) {
  if (cardinality < 1) throw NetError("discrete space must be non-empty");
  VariableSpace s;
  s.discrete_ = true;
  s.cardinality_ = cardinality;
  return s;
}

VariableSpace VariableSpace::box(Vec lower, Vec upper) {
  if (lower.empty() || lower.size() != upper.size())
    throw NetError("box space needs matching non-empty bounds");
  for (size_t i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]))
      throw NetError("box bounds must be finite");
  }
  VariableSpace s;
  s.discrete_ = false;
  s.lower_ = std::move(lower);
  s.upper_ = std::move(upper);
  return s;
}

int VariableSpace::cardinality() const {
  if (!discrete_) throw NetError("cardinality of a continuous space");
  return cardinality_;
}

int VariableSpace::dimension() const {
  return discrete_ ? 1 : static_cast<int>(lower_.size());
}

bool VariableSpace::contains(const Value& v) const {
  if (discrete_) {
    if (!holds_index(v)) return false;
    int k = std::get<int>(v);
    return k >= 0 && k < cardinality_;
  }
  if (!std::holds_alternative<Vec>(v)) return false;
  const Vec& x = std::get<Vec>(v);
  if (x.size() != lower_.size()) return false;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lower_[i] && x[i] <= upper_[i])) return false;
  }
  return true;
}

std::string VariableSpace::describe() const {
  std::ostringstream os;
  if (discrete_) {
    os << "discrete(" << cardinality_ << ")";
  } else {
    os << "box(" << lower_.size() << ")";
  }
  return os.str();
}

}  // namespace nfg
