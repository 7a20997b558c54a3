// Copyright 2026 The lgbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lgbench {

enum class TableKind { probability, quasi };

inline const char* to_string(TableKind k) { return k == TableKind::probability ? "probability" : "quasi"; }

/// Outcome digit 0 is the sign +1, digit 1 is the sign -1.
inline constexpr int digit_sign(std::size_t digit) { return digit == 0 ? 1 : -1; }
inline constexpr std::size_t sign_digit(int s) { return s == 1 ? 0 : 1; }

/// A (quasi-)probability over outcome tuples of fixed arity.
///
/// Tuples are stored lexicographically with the first position most
/// significant: for signs the order is (+,+), (+,-), (-,+), (-,-).
/// `labels` records which times (or variables) each position refers to.
class OutcomeTable {
  public:
    static constexpr double kSumTol = 1e-10;
    static constexpr double kNegTol = 1e-12;

    OutcomeTable(std::size_t arity, std::vector<double> values, TableKind kind, std::vector<std::size_t> labels = {},
                 std::size_t alphabet = 2)
        : arity_(arity), alphabet_(alphabet), values_(std::move(values)), kind_(kind), labels_(std::move(labels)) {
        if (alphabet_ < 2) {
            throw std::invalid_argument("OutcomeTable: alphabet must have at least two outcomes");
        }
        std::size_t expected = 1;
        for (std::size_t i = 0; i < arity_; ++i) {
            expected *= alphabet_;
        }
        if (values_.size() != expected) {
            throw std::invalid_argument("OutcomeTable: expected " + std::to_string(expected) + " values, got " +
                                        std::to_string(values_.size()));
        }
        if (labels_.empty()) {
            labels_.resize(arity_);
            std::iota(labels_.begin(), labels_.end(), std::size_t{0});
        }
        if (labels_.size() != arity_) {
            throw std::invalid_argument("OutcomeTable: label count does not match arity");
        }
        double sum = 0.0;
        for (double v : values_) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("OutcomeTable: non-finite entry");
            }
            sum += v;
            if (kind_ == TableKind::probability && v < -kNegTol) {
                throw std::invalid_argument("OutcomeTable: negative probability " + std::to_string(v));
            }
        }
        if (std::abs(sum - 1.0) > kSumTol) {
            throw std::invalid_argument("OutcomeTable: entries sum to " + std::to_string(sum) + ", not 1");
        }
    }

    std::size_t arity() const { return arity_; }
    std::size_t alphabet() const { return alphabet_; }
    std::size_t size() const { return values_.size(); }
    TableKind kind() const { return kind_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<std::size_t>& labels() const { return labels_; }

    double operator[](std::size_t index) const { return values_.at(index); }

    /// Outcome digits of a flat index.
    std::vector<std::size_t> digits(std::size_t index) const {
        std::vector<std::size_t> d(arity_);
        for (std::size_t k = arity_; k-- > 0;) {
            d[k] = index % alphabet_;
            index /= alphabet_;
        }
        return d;
    }

    std::size_t index_of(std::span<const std::size_t> digits) const {
        if (digits.size() != arity_) {
            throw std::invalid_argument("OutcomeTable: tuple length does not match arity");
        }
        std::size_t idx = 0;
        for (std::size_t d : digits) {
            if (d >= alphabet_) {
                throw std::invalid_argument("OutcomeTable: outcome digit out of range");
            }
            idx = idx * alphabet_ + d;
        }
        return idx;
    }

    /// Value at a sign tuple (dichotomic tables only).
    double at(std::initializer_list<int> signs) const {
        if (alphabet_ != 2) {
            throw std::logic_error("OutcomeTable::at: sign access requires a dichotomic table");
        }
        std::vector<std::size_t> d;
        for (int s : signs) {
            if (s != 1 && s != -1) {
                throw std::invalid_argument("OutcomeTable::at: signs must be +1 or -1");
            }
            d.push_back(sign_digit(s));
        }
        return values_.at(index_of(d));
    }

    /// Sum out one position; the result keeps the kind and remaining labels.
    OutcomeTable marginalize(std::size_t position) const {
        if (position >= arity_) {
            throw std::invalid_argument("OutcomeTable::marginalize: position out of range");
        }
        std::size_t out_size = values_.size() / alphabet_;
        std::vector<double> out(out_size, 0.0);
        for (std::size_t i = 0; i < values_.size(); ++i) {
            auto d = digits(i);
            d.erase(d.begin() + static_cast<std::ptrdiff_t>(position));
            std::size_t j = 0;
            for (std::size_t x : d) {
                j = j * alphabet_ + x;
            }
            out[j] += values_[i];
        }
        std::vector<std::size_t> labels = labels_;
        labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(position));
        return OutcomeTable(arity_ - 1, std::move(out), kind_, std::move(labels), alphabet_);
    }

    double min_value() const {
        double m = values_.front();
        for (double v : values_) {
            m = std::min(m, v);
        }
        return m;
    }

  private:
    std::size_t arity_;
    std::size_t alphabet_;
    std::vector<double> values_;
    TableKind kind_;
    std::vector<std::size_t> labels_;
};

}  // namespace lgbench
