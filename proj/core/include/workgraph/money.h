/*
 * Copyright (C) 2026 The Workgraph Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef WORKGRAPH_MONEY_H_
#define WORKGRAPH_MONEY_H_

#include <cmath>
#include <compare>
#include <cstdint>

namespace workgraph {

// US dollars held as integer cents.
class Money {
 public:
  constexpr Money() = default;
  static constexpr Money from_cents(std::int64_t cents) { return Money(cents); }
  // Rounds half away from zero to the nearest cent.
  static Money from_dollars(double dollars) {
    return Money(static_cast<std::int64_t>(std::llround(dollars * 100.0)));
  }

  constexpr std::int64_t cents() const { return cents_; }
  constexpr double dollars() const { return static_cast<double>(cents_) / 100.0; }

  friend constexpr Money operator+(Money a, Money b) {
    return Money(a.cents_ + b.cents_);
  }
  friend constexpr Money operator-(Money a, Money b) {
    return Money(a.cents_ - b.cents_);
  }
  constexpr Money& operator+=(Money other) {
    cents_ += other.cents_;
    return *this;
  }
  friend constexpr bool operator==(Money, Money) = default;
  friend constexpr auto operator<=>(Money, Money) = default;

 private:
  constexpr explicit Money(std::int64_t cents) : cents_(cents) {}

  std::int64_t cents_ = 0;
};

}  // namespace workgraph

#endif  // WORKGRAPH_MONEY_H_
