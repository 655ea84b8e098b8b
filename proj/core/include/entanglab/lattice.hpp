#pragma once

#include <array>
#include <vector>

namespace entanglab {

/// Finite rectangular window of Z^d, d in [1,3]. Sites are indexed
/// row-major over dims (the last coordinate varies fastest).
class Window {
 public:
  Window() : Window(std::vector<int>{1}) {}
  explicit Window(std::vector<int> dims);

  int dimension() const { return static_cast<int>(dims_.size()); }
  int site_count() const { return site_count_; }
  const std::vector<int>& dims() const { return dims_; }

  std::array<int, 3> coords(int site) const;
  int site(const std::array<int, 3>& c) const;
  bool contains(const std::array<int, 3>& c) const;

  /// l1 distance between two sites (open boundary, no wrap).
  int distance(int u, int v) const;

  bool operator==(const Window& other) const { return dims_ == other.dims_; }
  bool operator!=(const Window& other) const { return !(*this == other); }

 private:
  std::vector<int> dims_;
  int site_count_ = 0;
};

/// Subset of a window's sites, stored as a sorted index set. May be empty.
class Region {
 public:
  Region() : Region(Window(), {}) {}
  Region(Window window, std::vector<int> sites);

  static Region full(const Window& w);
  static Region empty(const Window& w);
  /// Inclusive coordinate box [lo, hi] per dimension.
  static Region box(const Window& w, const std::vector<int>& lo,
                    const std::vector<int>& hi);

  const Window& window() const { return window_; }
  const std::vector<int>& sites() const { return sites_; }
  int size() const { return static_cast<int>(sites_.size()); }
  bool is_empty() const { return sites_.empty(); }

  bool contains(int site) const;
  bool contains(const Region& other) const;
  bool disjoint_with(const Region& other) const;

  Region complement() const;
  Region set_union(const Region& other) const;
  Region set_minus(const Region& other) const;

  bool operator==(const Region& other) const {
    return window_ == other.window_ && sites_ == other.sites_;
  }

 private:
  Window window_;
  std::vector<int> sites_;
};

/// W = a ⊔ b ⊔ c.
struct Tripartition {
  Region a;
  Region b;
  Region c;
};

struct SplitBuffers {
  Region b1;
  Region b2;
  Region c;
};

/// Empirical buffer-volume regularity of a region: min/max of
/// |B_l| / (l |∂A|) over l in [1, ceil(|A|/|∂A|)].
struct RegularityReport {
  int boundary_size = 0;
  double length_scale = 0.0;  // |A| / (c_d |∂A|) with the measured c_d
  double c_d = 0.0;
  double C_d = 0.0;
  bool is_regular = false;
};

/// Sites of `a` at graph distance 1 from the complement. Subset of `a`.
Region boundary(const Region& a);

/// Width-l shell around `a`: b = {u in W\a : d(u,a) <= l}, c the rest.
Tripartition buffer(const Region& a, int width);

/// Disjoint width-l buffers around two components; requires
/// d(a1,a2) >= 3l.
SplitBuffers split_buffer(const Region& a1, const Region& a2, int width);

RegularityReport regularity_check(const Region& a);

/// min_{u in a, v in b} l1 distance; error if either region is empty.
int region_distance(const Region& a, const Region& b);

/// min_{v in a} l1 distance from site u.
int site_to_region_distance(const Window& w, int u, const Region& a);

}  // namespace entanglab
