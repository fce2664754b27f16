//===- IList.h - Owning intrusive doubly-linked list ------------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include <cassert>
#include <cstddef>
#include <iterator>
#include <memory>

namespace mir {

template <typename T> class IList;

/// Base for elements stored in an IList. The list owns its nodes.
template <typename T> class IListNode {
public:
  T *getPrevNode() const { return prev_; }
  T *getNextNode() const { return next_; }

private:
  T *prev_ = nullptr;
  T *next_ = nullptr;
  friend class IList<T>;
};

template <typename T> class IList {
public:
  class iterator {
  public:
    using iterator_category = std::bidirectional_iterator_tag;
    using value_type = T;
    using difference_type = std::ptrdiff_t;
    using pointer = T *;
    using reference = T &;

    iterator() = default;
    iterator(T *node, const IList *list) : node_(node), list_(list) {}

    T &operator*() const { return *node_; }
    T *operator->() const { return node_; }
    iterator &operator++() {
      node_ = node_->next_;
      return *this;
    }
    iterator operator++(int) {
      iterator tmp = *this;
      ++*this;
      return tmp;
    }
    iterator &operator--() {
      node_ = node_ ? node_->prev_ : list_->tail_;
      return *this;
    }
    iterator operator--(int) {
      iterator tmp = *this;
      --*this;
      return tmp;
    }
    bool operator==(const iterator &o) const { return node_ == o.node_; }
    bool operator!=(const iterator &o) const { return node_ != o.node_; }
    T *getNode() const { return node_; }

  private:
    T *node_ = nullptr;
    const IList *list_ = nullptr;
  };

  IList() = default;
  IList(const IList &) = delete;
  IList &operator=(const IList &) = delete;
  ~IList() { clear(); }

  iterator begin() const { return iterator(head_, this); }
  iterator end() const { return iterator(nullptr, this); }
  bool empty() const { return head_ == nullptr; }
  std::size_t size() const { return size_; }
  T *front() const { return head_; }
  T *back() const { return tail_; }

  /// Inserts `node` before `before` (null appends). Takes ownership.
  T *insert(T *before, std::unique_ptr<T> owned) {
    T *node = owned.release();
    assert(!node->prev_ && !node->next_);
    if (!before) {
      node->prev_ = tail_;
      if (tail_)
        tail_->next_ = node;
      else
        head_ = node;
      tail_ = node;
    } else {
      node->next_ = before;
      node->prev_ = before->prev_;
      if (before->prev_)
        before->prev_->next_ = node;
      else
        head_ = node;
      before->prev_ = node;
    }
    ++size_;
    return node;
  }

  T *push_back(std::unique_ptr<T> node) { return insert(nullptr, std::move(node)); }
  T *push_front(std::unique_ptr<T> node) { return insert(head_, std::move(node)); }

  /// Unlinks `node` and hands ownership back to the caller.
  std::unique_ptr<T> remove(T *node) {
    if (node->prev_)
      node->prev_->next_ = node->next_;
    else
      head_ = node->next_;
    if (node->next_)
      node->next_->prev_ = node->prev_;
    else
      tail_ = node->prev_;
    node->prev_ = node->next_ = nullptr;
    --size_;
    return std::unique_ptr<T>(node);
  }

  void clear() {
    while (tail_)
      remove(tail_).reset();
  }

  std::size_t indexOf(const T *node) const {
    std::size_t i = 0;
    for (T *n = head_; n; n = n->next_, ++i)
      if (n == node)
        return i;
    return size_;
  }

private:
  T *head_ = nullptr;
  T *tail_ = nullptr;
  std::size_t size_ = 0;
};

} // namespace mir
