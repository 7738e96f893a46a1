// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#include "swdstyle/attention.hpp"

#include <cmath>
#include <string>

#include "swdstyle/errors.hpp"

namespace swdstyle {
namespace {

void check_block(const AttentionBlock& b, const char* who) {
  const auto d = b.queries.cols();
  if (b.keys.cols() != d || b.values.cols() != d) {
    throw_dimension(std::string(who) + ": queries, keys and values must share d_k");
  }
  if (b.keys.rows() != b.queries.rows() || b.values.rows() != b.queries.rows()) {
    throw_dimension(std::string(who) + ": queries, keys and values must share the token count");
  }
}

}  // namespace

ColumnStats column_stats(const Eigen::MatrixXd& x) {
  ColumnStats s;
  s.mean = x.colwise().mean();
  const Eigen::MatrixXd centred = x.rowwise() - s.mean;
  s.stddev = (centred.colwise().squaredNorm() / static_cast<double>(x.rows())).cwiseSqrt();
  return s;
}

Eigen::MatrixXd adain(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double eps) {
  if (x.size() == 0 || y.size() == 0) throw_domain("adain: empty input");
  if (x.cols() != y.cols()) {
    throw_dimension("adain: feature dims differ (" + std::to_string(x.cols()) + " vs " +
                    std::to_string(y.cols()) + ")");
  }
  const ColumnStats sx = column_stats(x);
  const ColumnStats sy = column_stats(y);
  const Eigen::RowVectorXd scale = sy.stddev.array() / (sx.stddev.array() + eps);
  Eigen::MatrixXd out = (x.rowwise() - sx.mean);
  out = out.array().rowwise() * scale.array();
  out.rowwise() += sy.mean;
  return out;
}

Eigen::MatrixXd attention_weights(const Eigen::MatrixXd& q, const Eigen::MatrixXd& k) {
  if (q.cols() != k.cols()) throw_dimension("attention: d_k mismatch");
  if (q.rows() == 0 || k.rows() == 0) throw_domain("attention: no tokens");
  Eigen::MatrixXd s = (q * k.transpose()) / std::sqrt(static_cast<double>(q.cols()));
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    const double mx = s.row(i).maxCoeff();
    s.row(i) = (s.row(i).array() - mx).exp();
    s.row(i) /= s.row(i).sum();
  }
  return s;
}

Eigen::MatrixXd shared_attention(const AttentionBlock& target, const AttentionBlock& reference) {
  if (target.empty()) throw_domain("shared_attention: empty target");
  check_block(target, "target");
  if (reference.empty()) {
    return attention_weights(target.queries, target.keys) * target.values;
  }
  check_block(reference, "reference");
  if (reference.queries.cols() != target.queries.cols()) {
    throw_dimension("shared_attention: d_k mismatch between target and reference");
  }
  const Eigen::MatrixXd q = adain(target.queries, reference.queries);
  const Eigen::MatrixXd k_t = adain(target.keys, reference.keys);
  const auto nr = reference.keys.rows();
  const auto nt = target.keys.rows();
  Eigen::MatrixXd k(nr + nt, k_t.cols());
  k << reference.keys, k_t;
  Eigen::MatrixXd v(nr + nt, target.values.cols());
  v << reference.values, target.values;
  return attention_weights(q, k) * v;
}

}  // namespace swdstyle
