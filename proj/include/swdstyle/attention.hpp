// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

namespace swdstyle {

/// tokens x d_k query/key/value matrices for one attention participant.
struct AttentionBlock {
  Eigen::MatrixXd queries;
  Eigen::MatrixXd keys;
  Eigen::MatrixXd values;

  std::size_t tokens() const noexcept { return static_cast<std::size_t>(queries.rows()); }
  bool empty() const noexcept { return queries.rows() == 0; }
};

constexpr double kAdainEpsilon = 1e-5;

/// Per-column (feature) statistics over rows (tokens), population std.
struct ColumnStats {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd stddev;
};
ColumnStats column_stats(const Eigen::MatrixXd& x);

/// sigma(y) * (x - mu(x)) / (sigma(x) + eps) + mu(y), column-wise.
Eigen::MatrixXd adain(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                      double eps = kAdainEpsilon);

/// Row-stochastic attention matrix softmax(Q K^T / sqrt(d_k)).
Eigen::MatrixXd attention_weights(const Eigen::MatrixXd& q, const Eigen::MatrixXd& k);

/// Queries and keys of `target` are AdaIN-normalized to the reference's, keys
/// become [K_ref; K_t], values [V_ref; V_t] (values are not normalized). An
/// empty reference gives plain self-attention.
Eigen::MatrixXd shared_attention(const AttentionBlock& target, const AttentionBlock& reference);

}  // namespace swdstyle
