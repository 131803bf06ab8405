#include "freeact/partial_automorphism.hpp"

#include <algorithm>
#include <sstream>

namespace freeact {

PartialAutomorphism::PartialAutomorphism(std::span<const Element> domain,
                                         std::span<const Element> image) {
  if (domain.size() != image.size())
    throw InvalidInput("partial automorphism: domain and image differ in length");
  for (std::size_t i = 0; i < domain.size(); ++i) extend(domain[i], image[i]);
}

PartialAutomorphism PartialAutomorphism::identity(std::span<const Element> points) {
  return PartialAutomorphism(points, points);
}

std::optional<Element> PartialAutomorphism::apply(Element x) const {
  auto it = forward_.find(x);
  if (it == forward_.end()) return std::nullopt;
  return it->second;
}

std::optional<Element> PartialAutomorphism::apply_inverse(Element y) const {
  auto it = backward_.find(y);
  if (it == backward_.end()) return std::nullopt;
  return it->second;
}

void PartialAutomorphism::extend(Element x, Element y) {
  auto f = forward_.find(x);
  auto b = backward_.find(y);
  if (f != forward_.end() || b != backward_.end()) {
    if (f != forward_.end() && f->second == y) return;
    throw InvalidInput("partial automorphism: " + std::to_string(x) + "->" + std::to_string(y) +
                       " clashes with an existing pair");
  }
  forward_.emplace(x, y);
  backward_.emplace(y, x);
  domain_.push_back(x);
  image_.push_back(y);
}

PartialAutomorphism PartialAutomorphism::inverse() const { return PartialAutomorphism(image_, domain_); }

PartialAutomorphism PartialAutomorphism::prefix(std::size_t n) const {
  n = std::min(n, domain_.size());
  return PartialAutomorphism(std::span(domain_).first(n), std::span(image_).first(n));
}

bool PartialAutomorphism::extends(const PartialAutomorphism& smaller) const {
  for (std::size_t i = 0; i < smaller.size(); ++i) {
    auto y = apply(smaller.domain_[i]);
    if (!y || *y != smaller.image_[i]) return false;
  }
  return true;
}

std::optional<std::pair<Element, Element>> PartialAutomorphism::type_violation(
    const StructureOracle& oracle) const {
  for (std::size_t i = 0; i < domain_.size(); ++i)
    for (std::size_t j = i + 1; j < domain_.size(); ++j)
      if (oracle.pair_code(domain_[i], domain_[j]) != oracle.pair_code(image_[i], image_[j]))
        return std::make_pair(domain_[i], domain_[j]);
  return std::nullopt;
}

std::string PartialAutomorphism::to_string() const {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < domain_.size(); ++i)
    out << (i ? ", " : "") << domain_[i] << "->" << image_[i];
  out << '}';
  return out.str();
}

}  // namespace freeact
