#include "tog/nn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tog/errors.hpp"

namespace tog::nn {

namespace {

using NodePtr = std::shared_ptr<Node>;

bool wants(const NodePtr& n) { return n->requires_grad && n->grad_ready; }

constexpr double kProbClamp = 1e-7;

void require_2d(const Value& v, const char* op) {
  if (v.data().rank() != 2) throw ShapeMismatch(std::string(op) + ": expected rank-2, got " + shape_string(v.data()));
}

void require_same(const Value& a, const Value& b, const char* op) {
  if (!a.data().same_shape(b.data()))
    throw ShapeMismatch(std::string(op) + ": shape " + shape_string(a.data()) + " vs " + shape_string(b.data()));
}

}  // namespace

Value add(const Value& a, const Value& b) {
  require_same(a, b, "add");
  Tensor out = a.data();
  out.vec() += b.data().vec();
  return make_op("add", std::move(out), {a, b}, [pa = a.node(), pb = b.node()](Node& n) {
    if (wants(pa)) pa->grad.vec() += n.grad.vec();
    if (wants(pb)) pb->grad.vec() += n.grad.vec();
  });
}

Value sub(const Value& a, const Value& b) {
  require_same(a, b, "sub");
  Tensor out = a.data();
  out.vec() -= b.data().vec();
  return make_op("sub", std::move(out), {a, b}, [pa = a.node(), pb = b.node()](Node& n) {
    if (wants(pa)) pa->grad.vec() += n.grad.vec();
    if (wants(pb)) pb->grad.vec() -= n.grad.vec();
  });
}

Value mul(const Value& a, const Value& b) {
  require_same(a, b, "mul");
  Tensor out = a.data();
  out.vec().array() *= b.data().vec().array();
  return make_op("mul", std::move(out), {a, b}, [pa = a.node(), pb = b.node()](Node& n) {
    if (wants(pa)) pa->grad.vec().array() += n.grad.vec().array() * pb->data.vec().array();
    if (wants(pb)) pb->grad.vec().array() += n.grad.vec().array() * pa->data.vec().array();
  });
}

Value scale(const Value& a, double c) {
  Tensor out = a.data();
  out.vec() *= c;
  return make_op("scale", std::move(out), {a}, [pa = a.node(), c](Node& n) {
    if (wants(pa)) pa->grad.vec() += c * n.grad.vec();
  });
}

Value matmul(const Value& a, const Value& b) {
  require_2d(a, "matmul");
  require_2d(b, "matmul");
  if (a.cols() != b.rows())
    throw ShapeMismatch("matmul: " + shape_string(a.data()) + " x " + shape_string(b.data()));
  Tensor out({a.rows(), b.cols()});
  out.mat().noalias() = a.data().mat() * b.data().mat();
  return make_op("matmul", std::move(out), {a, b}, [pa = a.node(), pb = b.node()](Node& n) {
    if (wants(pa)) pa->grad.mat().noalias() += n.grad.mat() * pb->data.mat().transpose();
    if (wants(pb)) pb->grad.mat().noalias() += pa->data.mat().transpose() * n.grad.mat();
  });
}

Value matmul_nt(const Value& a, const Value& b) {
  require_2d(a, "matmul_nt");
  require_2d(b, "matmul_nt");
  if (a.cols() != b.cols())
    throw ShapeMismatch("matmul_nt: " + shape_string(a.data()) + " x " + shape_string(b.data()) + "^T");
  Tensor out({a.rows(), b.rows()});
  out.mat().noalias() = a.data().mat() * b.data().mat().transpose();
  return make_op("matmul_nt", std::move(out), {a, b}, [pa = a.node(), pb = b.node()](Node& n) {
    if (wants(pa)) pa->grad.mat().noalias() += n.grad.mat() * pb->data.mat();
    if (wants(pb)) pb->grad.mat().noalias() += n.grad.mat().transpose() * pa->data.mat();
  });
}

Value add_row(const Value& x, const Value& r) {
  require_2d(x, "add_row");
  if (r.data().rank() != 1 || r.size() != x.cols())
    throw ShapeMismatch("add_row: " + shape_string(x.data()) + " + " + shape_string(r.data()));
  Tensor out = x.data();
  out.mat().rowwise() += r.data().vec().transpose();
  return make_op("add_row", std::move(out), {x, r}, [px = x.node(), pr = r.node()](Node& n) {
    if (wants(px)) px->grad.vec() += n.grad.vec();
    if (wants(pr)) pr->grad.vec() += n.grad.mat().colwise().sum();
  });
}

Value mul_row(const Value& x, const Value& r) {
  require_2d(x, "mul_row");
  if (r.data().rank() != 1 || r.size() != x.cols())
    throw ShapeMismatch("mul_row: " + shape_string(x.data()) + " * " + shape_string(r.data()));
  Tensor out = x.data();
  out.mat().array().rowwise() *= r.data().vec().transpose().array();
  return make_op("mul_row", std::move(out), {x, r}, [px = x.node(), pr = r.node()](Node& n) {
    if (wants(px)) px->grad.mat().array() += n.grad.mat().array().rowwise() * pr->data.vec().transpose().array();
    if (wants(pr)) {
      for (std::size_t r = 0; r < n.data.rows(); ++r) {
        for (std::size_t c = 0; c < n.data.cols(); ++c) pr->grad[c] += n.grad.at(r, c) * px->data.at(r, c);
      }
    }
  });
}

Value linear(const Value& x, const Value& w, const Value& b) { return add_row(matmul(x, w), b); }

Value relu(const Value& x) {
  Tensor out = x.data();
  for (double& v : out) v = v > 0.0 ? v : 0.0;
  return make_op("relu", std::move(out), {x}, [px = x.node()](Node& n) {
    if (!wants(px)) return;
    for (std::size_t i = 0; i < n.grad.size(); ++i) {
      if (px->data[i] > 0.0) px->grad[i] += n.grad[i];
    }
  });
}

Value sigmoid(const Value& x) {
  Tensor out = x.data();
  for (double& v : out) v = 1.0 / (1.0 + std::exp(-v));
  return make_op("sigmoid", std::move(out), {x}, [px = x.node()](Node& n) {
    if (!wants(px)) return;
    for (std::size_t i = 0; i < n.grad.size(); ++i) {
      const double y = n.data[i];
      px->grad[i] += n.grad[i] * y * (1.0 - y);
    }
  });
}

Value softmax_rows(const Value& x) {
  require_2d(x, "softmax_rows");
  Tensor out = x.data();
  const std::size_t rows = out.rows(), cols = out.cols();
  for (std::size_t r = 0; r < rows; ++r) {
    double mx = out.at(r, 0);
    for (std::size_t c = 1; c < cols; ++c) mx = std::max(mx, out.at(r, c));
    double sum = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      const double e = std::exp(out.at(r, c) - mx);
      out.at(r, c) = e;
      sum += e;
    }
    for (std::size_t c = 0; c < cols; ++c) out.at(r, c) /= sum;
  }
  return make_op("softmax_rows", std::move(out), {x}, [px = x.node()](Node& n) {
    if (!wants(px)) return;
    const std::size_t rows = n.data.rows(), cols = n.data.cols();
    for (std::size_t r = 0; r < rows; ++r) {
      double dot = 0.0;
      for (std::size_t c = 0; c < cols; ++c) dot += n.grad.at(r, c) * n.data.at(r, c);
      for (std::size_t c = 0; c < cols; ++c) {
        px->grad.at(r, c) += n.data.at(r, c) * (n.grad.at(r, c) - dot);
      }
    }
  });
}

Value layer_norm(const Value& x, const Value& gain, const Value& bias, double eps) {
  require_2d(x, "layer_norm");
  const std::size_t cols = x.cols();
  if (gain.data().rank() != 1 || gain.size() != cols || bias.data().rank() != 1 || bias.size() != cols)
    throw ShapeMismatch("layer_norm: gain/bias width mismatch");
  const std::size_t rows = x.rows();

  Tensor norm({rows, cols});
  Tensor inv_std({rows});
  for (std::size_t r = 0; r < rows; ++r) {
    double mean = 0.0;
    for (std::size_t c = 0; c < cols; ++c) mean += x.data().at(r, c);
    mean /= static_cast<double>(cols);
    double var = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      const double d = x.data().at(r, c) - mean;
      var += d * d;
    }
    var /= static_cast<double>(cols);
    const double is = 1.0 / std::sqrt(var + eps);
    inv_std[r] = is;
    for (std::size_t c = 0; c < cols; ++c) norm.at(r, c) = (x.data().at(r, c) - mean) * is;
  }
  Tensor out({rows, cols});
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out.at(r, c) = norm.at(r, c) * gain.data()[c] + bias.data()[c];
  }
  return make_op("layer_norm", std::move(out), {x, gain, bias},
                 [px = x.node(), pg = gain.node(), pb = bias.node(), norm = std::move(norm),
                  inv_std = std::move(inv_std)](Node& n) {
                   const std::size_t rows = n.data.rows(), cols = n.data.cols();
                   for (std::size_t r = 0; r < rows; ++r) {
                     if (wants(pg) || wants(pb)) {
                       for (std::size_t c = 0; c < cols; ++c) {
                         if (wants(pg)) pg->grad[c] += n.grad.at(r, c) * norm.at(r, c);
                         if (wants(pb)) pb->grad[c] += n.grad.at(r, c);
                       }
                     }
                     if (!wants(px)) continue;
                     double g_mean = 0.0, gx_mean = 0.0;
                     for (std::size_t c = 0; c < cols; ++c) {
                       const double gh = n.grad.at(r, c) * pg->data[c];
                       g_mean += gh;
                       gx_mean += gh * norm.at(r, c);
                     }
                     g_mean /= static_cast<double>(cols);
                     gx_mean /= static_cast<double>(cols);
                     for (std::size_t c = 0; c < cols; ++c) {
                       const double gh = n.grad.at(r, c) * pg->data[c];
                       px->grad.at(r, c) += inv_std[r] * (gh - g_mean - norm.at(r, c) * gx_mean);
                     }
                   }
                 });
}

Value dropout(const Value& x, double p, Rng& rng, Mode mode) {
  if (p < 0.0 || p >= 1.0) throw InvalidInput("dropout: p must be in [0,1)");
  if (mode == Mode::Eval || p == 0.0) return x;
  const double keep = 1.0 - p;
  Tensor out = x.data();
  auto mask = std::make_shared<Mask>(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const bool k = !rng.bernoulli(p);
    (*mask)[i] = k;
    out[i] = k ? out[i] / keep : 0.0;
  }
  return make_op("dropout", std::move(out), {x}, [px = x.node(), mask, keep](Node& n) {
    if (!wants(px)) return;
    for (std::size_t i = 0; i < n.grad.size(); ++i) {
      if ((*mask)[i]) px->grad[i] += n.grad[i] / keep;
    }
  });
}

Value bce_loss(const Value& scores, const Tensor& labels) {
  if (scores.data().rank() != 1) throw ShapeMismatch("bce_loss: scores must be rank-1");
  const std::size_t n = scores.size();
  if (n == 0) throw EmptyBatch("bce_loss: empty batch");
  if (labels.size() != n) throw ShapeMismatch("bce_loss: labels size mismatch");
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = labels[i];
    if (y != 0.0 && y != 1.0) throw InvalidInput("bce_loss: labels must be 0 or 1");
    const double s = std::clamp(scores.data()[i], kProbClamp, 1.0 - kProbClamp);
    loss -= y * std::log(s) + (1.0 - y) * std::log(1.0 - s);
  }
  loss /= static_cast<double>(n);
  return make_op("bce_loss", Tensor::scalar(loss), {scores}, [ps = scores.node(), labels](Node& nd) {
    if (!wants(ps)) return;
    const std::size_t n = labels.size();
    const double g = nd.grad[0] / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double raw = ps->data[i];
      if (raw <= kProbClamp || raw >= 1.0 - kProbClamp) continue;
      ps->grad[i] += g * (raw - labels[i]) / (raw * (1.0 - raw));
    }
  });
}

Value masked_mean_rows(const Value& x, const Mask& mask) {
  require_2d(x, "masked_mean_rows");
  if (mask.size() != x.rows()) throw ShapeMismatch("masked_mean_rows: mask length mismatch");
  std::size_t count = 0;
  for (auto m : mask) count += m ? 1 : 0;
  if (count == 0) throw AllKeysMasked("masked_mean_rows: no unmasked rows");
  const std::size_t cols = x.cols();
  Tensor out({cols});
  for (std::size_t r = 0; r < x.rows(); ++r) {
    if (!mask[r]) continue;
    for (std::size_t c = 0; c < cols; ++c) out[c] += x.data().at(r, c);
  }
  for (std::size_t c = 0; c < cols; ++c) out[c] /= static_cast<double>(count);
  return make_op("masked_mean_rows", std::move(out), {x}, [px = x.node(), mask, count](Node& n) {
    if (!wants(px)) return;
    const std::size_t cols = n.data.size();
    for (std::size_t r = 0; r < px->data.rows(); ++r) {
      if (!mask[r]) continue;
      for (std::size_t c = 0; c < cols; ++c) px->grad.at(r, c) += n.grad[c] / static_cast<double>(count);
    }
  });
}

Value zero_rows(const Value& x, const Mask& keep) {
  require_2d(x, "zero_rows");
  if (keep.size() != x.rows()) throw ShapeMismatch("zero_rows: mask length mismatch");
  Tensor out = x.data();
  for (std::size_t r = 0; r < out.rows(); ++r) {
    if (keep[r]) continue;
    for (std::size_t c = 0; c < out.cols(); ++c) out.at(r, c) = 0.0;
  }
  return make_op("zero_rows", std::move(out), {x}, [px = x.node(), keep](Node& n) {
    if (!wants(px)) return;
    for (std::size_t r = 0; r < n.data.rows(); ++r) {
      if (!keep[r]) continue;
      for (std::size_t c = 0; c < n.data.cols(); ++c) px->grad.at(r, c) += n.grad.at(r, c);
    }
  });
}

Value concat_cols(const std::vector<Value>& parts) {
  if (parts.empty()) throw InvalidInput("concat_cols: no parts");
  for (const auto& p : parts) require_2d(p, "concat_cols");
  const std::size_t rows = parts.front().rows();
  std::size_t cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) throw ShapeMismatch("concat_cols: row count mismatch");
    cols += p.cols();
  }
  Tensor out({rows, cols});
  std::size_t base = 0;
  for (const auto& p : parts) {
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < p.cols(); ++c) out.at(r, base + c) = p.data().at(r, c);
    }
    base += p.cols();
  }
  std::vector<NodePtr> nodes;
  for (const auto& p : parts) nodes.push_back(p.node());
  return make_op("concat_cols", std::move(out), parts, [nodes](Node& n) {
    std::size_t base = 0;
    for (const auto& p : nodes) {
      const std::size_t pc = p->data.cols();
      if (wants(p)) {
        for (std::size_t r = 0; r < n.data.rows(); ++r) {
          for (std::size_t c = 0; c < pc; ++c) p->grad.at(r, c) += n.grad.at(r, base + c);
        }
      }
      base += pc;
    }
  });
}

Value stack_rows(const std::vector<Value>& parts) {
  if (parts.empty()) throw EmptyBatch("stack_rows: no parts");
  const std::size_t cols = parts.front().size();
  Tensor out({parts.size(), cols});
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const Tensor& t = parts[i].data();
    if (t.size() != cols || t.rows() != 1) throw ShapeMismatch("stack_rows: part shape mismatch");
    for (std::size_t c = 0; c < cols; ++c) out.at(i, c) = t[c];
  }
  std::vector<NodePtr> nodes;
  for (const auto& p : parts) nodes.push_back(p.node());
  return make_op("stack_rows", std::move(out), parts, [nodes](Node& n) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!wants(nodes[i])) continue;
      for (std::size_t c = 0; c < n.data.cols(); ++c) nodes[i]->grad[c] += n.grad.at(i, c);
    }
  });
}

Value gather_rows(const Value& x, const std::vector<std::size_t>& idx) {
  require_2d(x, "gather_rows");
  const std::size_t cols = x.cols();
  Tensor out({idx.size(), cols});
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= x.rows()) throw InvalidInput("gather_rows: index out of range");
    for (std::size_t c = 0; c < cols; ++c) out.at(i, c) = x.data().at(idx[i], c);
  }
  return make_op("gather_rows", std::move(out), {x}, [px = x.node(), idx](Node& n) {
    if (!wants(px)) return;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      for (std::size_t c = 0; c < n.data.cols(); ++c) px->grad.at(idx[i], c) += n.grad.at(i, c);
    }
  });
}

Value segment_max(const Value& x, const std::vector<std::size_t>& offsets) {
  require_2d(x, "segment_max");
  if (offsets.size() < 2 || offsets.front() != 0 || offsets.back() != x.rows())
    throw InvalidInput("segment_max: offsets must start at 0 and end at row count");
  const std::size_t k = offsets.size() - 1;
  const std::size_t cols = x.cols();
  Tensor out({k, cols});
  auto argmax = std::make_shared<std::vector<std::size_t>>(k * cols);
  for (std::size_t s = 0; s < k; ++s) {
    if (offsets[s + 1] <= offsets[s]) throw InvalidInput("segment_max: empty segment");
    for (std::size_t c = 0; c < cols; ++c) {
      std::size_t best = offsets[s];
      double bv = x.data().at(best, c);
      for (std::size_t r = offsets[s] + 1; r < offsets[s + 1]; ++r) {
        const double v = x.data().at(r, c);
        if (v > bv) {
          bv = v;
          best = r;
        }
      }
      out.at(s, c) = bv;
      (*argmax)[s * cols + c] = best;
    }
  }
  return make_op("segment_max", std::move(out), {x}, [px = x.node(), argmax](Node& n) {
    if (!wants(px)) return;
    const std::size_t cols = n.data.cols();
    for (std::size_t s = 0; s < n.data.rows(); ++s) {
      for (std::size_t c = 0; c < cols; ++c) px->grad.at((*argmax)[s * cols + c], c) += n.grad.at(s, c);
    }
  });
}

Value slice_cols(const Value& x, std::size_t c0, std::size_t c1) {
  require_2d(x, "slice_cols");
  if (c0 >= c1 || c1 > x.cols()) throw ShapeMismatch("slice_cols: bad column range");
  const std::size_t cols = c1 - c0;
  Tensor out({x.rows(), cols});
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) out.at(r, c) = x.data().at(r, c0 + c);
  }
  return make_op("slice_cols", std::move(out), {x}, [px = x.node(), c0](Node& n) {
    if (!wants(px)) return;
    for (std::size_t r = 0; r < n.data.rows(); ++r) {
      for (std::size_t c = 0; c < n.data.cols(); ++c) px->grad.at(r, c0 + c) += n.grad.at(r, c);
    }
  });
}

Value reshape(const Value& x, std::vector<std::size_t> shape) {
  Tensor out = x.data().reshaped(std::move(shape));
  return make_op("reshape", std::move(out), {x}, [px = x.node()](Node& n) {
    if (wants(px)) px->grad.vec() += n.grad.vec();
  });
}

Value sum(const Value& x) {
  double s = 0.0;
  for (double v : x.data()) s += v;
  return make_op("sum", Tensor::scalar(s), {x}, [px = x.node()](Node& n) {
    if (wants(px)) px->grad.vec().array() += n.grad[0];
  });
}

Value mean_all(const Value& x) {
  if (x.size() == 0) throw EmptyBatch("mean_all: empty tensor");
  return scale(sum(x), 1.0 / static_cast<double>(x.size()));
}

BatchNorm1d::BatchNorm1d(std::size_t width)
    : gain(parameter(Tensor::full({width}, 1.0))),
      bias(parameter(Tensor::zeros({width}))),
      running_mean(Tensor::zeros({width})),
      running_var(Tensor::full({width}, 1.0)) {}

Value BatchNorm1d::forward(const Value& x, Mode mode) {
  require_2d(x, "batch_norm");
  const std::size_t cols = x.cols();
  if (cols != gain.size()) throw ShapeMismatch("batch_norm: width mismatch");
  const std::size_t rows = x.rows();
  if (rows == 0) throw EmptyBatch("batch_norm: empty batch");

  if (mode == Mode::Eval) {
    Tensor out({rows, cols});
    for (std::size_t c = 0; c < cols; ++c) {
      const double is = 1.0 / std::sqrt(running_var[c] + eps);
      const double m = running_mean[c];
      for (std::size_t r = 0; r < rows; ++r) out.at(r, c) = (x.data().at(r, c) - m) * is;
    }
    Value norm = make_op("batch_norm_eval", std::move(out), {x},
                         [px = x.node(), rm = running_mean, rv = running_var, eps = eps](Node& n) {
                           if (!wants(px)) return;
                           for (std::size_t c = 0; c < n.data.cols(); ++c) {
                             const double is = 1.0 / std::sqrt(rv[c] + eps);
                             for (std::size_t r = 0; r < n.data.rows(); ++r)
                               px->grad.at(r, c) += n.grad.at(r, c) * is;
                           }
                         });
    return add_row(mul_row(norm, gain), bias);
  }

  Tensor mean({cols}), var({cols});
  for (std::size_t c = 0; c < cols; ++c) {
    double m = 0.0;
    for (std::size_t r = 0; r < rows; ++r) m += x.data().at(r, c);
    m /= static_cast<double>(rows);
    double v = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      const double d = x.data().at(r, c) - m;
      v += d * d;
    }
    v /= static_cast<double>(rows);
    mean[c] = m;
    var[c] = v;
  }
  const double unbias = rows > 1 ? static_cast<double>(rows) / static_cast<double>(rows - 1) : 1.0;
  for (std::size_t c = 0; c < cols; ++c) {
    running_mean[c] = (1.0 - momentum) * running_mean[c] + momentum * mean[c];
    running_var[c] = (1.0 - momentum) * running_var[c] + momentum * var[c] * unbias;
  }

  Tensor norm({rows, cols});
  for (std::size_t c = 0; c < cols; ++c) {
    const double is = 1.0 / std::sqrt(var[c] + eps);
    for (std::size_t r = 0; r < rows; ++r) norm.at(r, c) = (x.data().at(r, c) - mean[c]) * is;
  }
  Tensor out({rows, cols});
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out.at(r, c) = norm.at(r, c) * gain.data()[c] + bias.data()[c];
  }
  return make_op("batch_norm", std::move(out), {x, gain, bias},
                 [px = x.node(), pg = gain.node(), pb = bias.node(), norm = std::move(norm), var = std::move(var),
                  eps = eps](Node& n) {
                   const std::size_t rows = n.data.rows(), cols = n.data.cols();
                   const double bn = static_cast<double>(rows);
                   for (std::size_t c = 0; c < cols; ++c) {
                     double g_sum = 0.0, gx_sum = 0.0;
                     for (std::size_t r = 0; r < rows; ++r) {
                       const double g = n.grad.at(r, c);
                       g_sum += g;
                       gx_sum += g * norm.at(r, c);
                     }
                     if (wants(pg)) pg->grad[c] += gx_sum;
                     if (wants(pb)) pb->grad[c] += g_sum;
                     if (!wants(px)) continue;
                     const double is = 1.0 / std::sqrt(var[c] + eps);
                     const double gamma = pg->data[c];
                     for (std::size_t r = 0; r < rows; ++r) {
                       const double gh = n.grad.at(r, c) * gamma;
                       px->grad.at(r, c) +=
                           is * (gh - gamma * g_sum / bn - norm.at(r, c) * gamma * gx_sum / bn);
                     }
                   }
                 });
}

Linear::Linear(std::size_t in, std::size_t out, Rng& rng)
    : w(parameter(xavier_uniform(in, out, rng))), b(parameter(Tensor::zeros({out}))) {}

LayerNorm::LayerNorm(std::size_t width)
    : gain(parameter(Tensor::full({width}, 1.0))), bias(parameter(Tensor::zeros({width}))) {}

Tensor xavier_uniform(std::size_t in, std::size_t out, Rng& rng) {
  Tensor t({in, out});
  const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
  for (double& v : t) v = rng.uniform(-limit, limit);
  return t;
}

}  // namespace tog::nn
