#pragma once

// Finite partial bijections of an oracle's universe.

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "freeact/structures.hpp"

namespace freeact {

class PartialAutomorphism {
 public:
  PartialAutomorphism() = default;
  // Throws InvalidInput unless the lists have equal length and define a bijection.
  PartialAutomorphism(std::span<const Element> domain, std::span<const Element> image);

  static PartialAutomorphism identity(std::span<const Element> points);

  // Insertion-ordered domain and image: image()[i] is the image of domain()[i].
  const std::vector<Element>& domain() const { return domain_; }
  const std::vector<Element>& image() const { return image_; }
  std::size_t size() const { return domain_.size(); }
  bool empty() const { return domain_.empty(); }

  bool in_domain(Element x) const { return forward_.count(x) != 0; }
  bool in_image(Element y) const { return backward_.count(y) != 0; }
  std::optional<Element> apply(Element x) const;
  std::optional<Element> apply_inverse(Element y) const;

  // Adds x -> y. Re-adding an existing pair is a no-op; any other clash
  // throws InvalidInput.
  void extend(Element x, Element y);

  PartialAutomorphism inverse() const;
  // The restriction to the first n insertions.
  PartialAutomorphism prefix(std::size_t n) const;
  bool extends(const PartialAutomorphism& smaller) const;

  // First pair (x, y) of domain points whose pair code differs from that of
  // their images, if any. For binary signatures this decides whether the map
  // preserves the type of every tuple.
  std::optional<std::pair<Element, Element>> type_violation(const StructureOracle& oracle) const;
  bool preserves_types(const StructureOracle& oracle) const {
    return !type_violation(oracle).has_value();
  }

  std::string to_string() const;

  friend bool operator==(const PartialAutomorphism& a, const PartialAutomorphism& b) {
    return a.domain_ == b.domain_ && a.image_ == b.image_;
  }

 private:
  std::vector<Element> domain_;
  std::vector<Element> image_;
  std::unordered_map<Element, Element> forward_;
  std::unordered_map<Element, Element> backward_;
};

}  // namespace freeact
