#pragma once

// Explicit Adams-Bashforth multistep weights with lower-order bootstrap.

#include "geomorph/errors.hpp"

#include <array>
#include <cstddef>
#include <deque>
#include <span>

namespace geomorph {

inline constexpr int kMaxAdamsBashforthOrder = 5;

/// Weights of the order-k method, newest tendency first.
inline std::span<const double> adams_bashforth_weights(int order) {
    static constexpr std::array<double, 1> ab1{1.0};
    static constexpr std::array<double, 2> ab2{3.0 / 2.0, -1.0 / 2.0};
    static constexpr std::array<double, 3> ab3{23.0 / 12.0, -16.0 / 12.0, 5.0 / 12.0};
    static constexpr std::array<double, 4> ab4{55.0 / 24.0, -59.0 / 24.0, 37.0 / 24.0, -9.0 / 24.0};
    static constexpr std::array<double, 5> ab5{1901.0 / 720.0, -2774.0 / 720.0, 2616.0 / 720.0, -1274.0 / 720.0,
                                               251.0 / 720.0};
    switch (order) {
    case 1: return ab1;
    case 2: return ab2;
    case 3: return ab3;
    case 4: return ab4;
    case 5: return ab5;
    default: throw InvalidInput("adams_bashforth_weights: order must be 1..5");
    }
}

/// The last few tendencies, newest first, capped at the target order. The
/// effective order is the number of stored tendencies, so the first steps
/// run AB1, AB2, ... until the cap is reached.
template <class T>
class TendencyHistory {
public:
    explicit TendencyHistory(int max_order) : max_order_(max_order) {
        if (max_order < 1 || max_order > kMaxAdamsBashforthOrder) {
            throw InvalidInput("TendencyHistory: order must be 1..5");
        }
    }

    void push(T tendency) {
        items_.push_front(std::move(tendency));
        if (items_.size() > static_cast<std::size_t>(max_order_)) items_.pop_back();
    }

    int order() const { return static_cast<int>(items_.size()); }
    int max_order() const { return max_order_; }
    bool empty() const { return items_.empty(); }
    const T& operator[](std::size_t k) const { return items_[k]; }
    void clear() { items_.clear(); }

private:
    int max_order_;
    std::deque<T> items_;
};

} // namespace geomorph
