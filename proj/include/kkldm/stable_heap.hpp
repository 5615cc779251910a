#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace kkldm {

/// Binary max-heap with deterministic tie breaking: among equal keys the
/// entry inserted first comes out first. Every push or replace_top counts
/// as a new insertion.
template <class Key>
class StableMaxHeap {
 public:
  struct Entry {
    Key key;
    std::uint64_t seq;
    std::uint32_t id;
  };

  StableMaxHeap() = default;

  void reserve(std::size_t n) { data_.reserve(n); }

  void clear() {
    data_.clear();
    next_seq_ = 0;
  }

  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  /// Appends without restoring heap order; call heapify() afterwards.
  void append(const Key& key, std::uint32_t id) { data_.push_back({key, next_seq_++, id}); }

  void heapify() {
    for (std::size_t i = data_.size() / 2; i-- > 0;) sift_down(i);
  }

  void push(const Key& key, std::uint32_t id) {
    data_.push_back({key, next_seq_++, id});
    sift_up(data_.size() - 1);
  }

  const Entry& top() const { return data_.front(); }

  Entry pop() {
    Entry out = std::move(data_.front());
    data_.front() = std::move(data_.back());
    data_.pop_back();
    if (!data_.empty()) sift_down(0);
    return out;
  }

  void replace_top(const Key& key, std::uint32_t id) {
    data_.front() = {key, next_seq_++, id};
    sift_down(0);
  }

 private:
  static bool before(const Entry& a, const Entry& b) {
    if (b.key < a.key) return true;
    if (a.key < b.key) return false;
    return a.seq < b.seq;
  }

  void sift_up(std::size_t i) {
    Entry e = std::move(data_[i]);
    while (i > 0) {
      const std::size_t parent = (i - 1) / 2;
      if (!before(e, data_[parent])) break;
      data_[i] = std::move(data_[parent]);
      i = parent;
    }
    data_[i] = std::move(e);
  }

  void sift_down(std::size_t i) {
    const std::size_t n = data_.size();
    Entry e = std::move(data_[i]);
    for (;;) {
      std::size_t child = 2 * i + 1;
      if (child >= n) break;
      if (child + 1 < n && before(data_[child + 1], data_[child])) ++child;
      if (!before(data_[child], e)) break;
      data_[i] = std::move(data_[child]);
      i = child;
    }
    data_[i] = std::move(e);
  }

  std::vector<Entry> data_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace kkldm
