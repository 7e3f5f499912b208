#pragma once

#include <memory>

namespace hypoteq {

/// Immutable, shareable owning pointer for recursive value types. Equality
/// compares the pointees.
template <typename T>
class Box {
public:
    Box(T value) : p_(std::make_shared<const T>(std::move(value))) {}

    const T& operator*() const { return *p_; }
    const T* operator->() const { return p_.get(); }
    const T& get() const { return *p_; }

    friend bool operator==(const Box& a, const Box& b) { return *a.p_ == *b.p_; }

private:
    std::shared_ptr<const T> p_;
};

}  // namespace hypoteq
