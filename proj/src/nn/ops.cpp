#include "mri/nn/ops.hpp"

#include <cmath>
#include <cstring>

#include "mri/kspace.hpp"

namespace mri::nn {

namespace {

void require_same(const TensorPtr& a, const TensorPtr& b, const char* op) {
  if (a->shape != b->shape) throw shape_error(std::string(op) + ": shape mismatch");
}

// complex view helpers: tensors shaped [..., 2] copied into cplx buffers
std::vector<cplx> as_complex(const std::vector<double>& v) {
  std::vector<cplx> out(v.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) out[i] = cplx(v[2 * i], v[2 * i + 1]);
  return out;
}

void from_complex(const std::vector<cplx>& v, std::vector<double>& out) {
  for (size_t i = 0; i < v.size(); ++i) {
    out[2 * i] = v[i].real();
    out[2 * i + 1] = v[i].imag();
  }
}

}  // namespace

// ---------------------------------------------------------------- elementwise

TensorPtr add(TensorPtr a, TensorPtr b) {
  require_same(a, b, "add");
  auto out = Tensor::make(a->shape);
  for (size_t i = 0; i < out->value.size(); ++i) out->value[i] = a->value[i] + b->value[i];
  link(out, {a, b});
  out->backward_fn = [a, b](Tensor& self) {
    for (size_t i = 0; i < self.grad.size(); ++i) {
      a->grad[i] += self.grad[i];
      b->grad[i] += self.grad[i];
    }
  };
  return out;
}

TensorPtr sub(TensorPtr a, TensorPtr b) {
  require_same(a, b, "sub");
  auto out = Tensor::make(a->shape);
  for (size_t i = 0; i < out->value.size(); ++i) out->value[i] = a->value[i] - b->value[i];
  link(out, {a, b});
  out->backward_fn = [a, b](Tensor& self) {
    for (size_t i = 0; i < self.grad.size(); ++i) {
      a->grad[i] += self.grad[i];
      b->grad[i] -= self.grad[i];
    }
  };
  return out;
}

TensorPtr mul(TensorPtr a, TensorPtr b) {
  require_same(a, b, "mul");
  auto out = Tensor::make(a->shape);
  for (size_t i = 0; i < out->value.size(); ++i) out->value[i] = a->value[i] * b->value[i];
  link(out, {a, b});
  out->backward_fn = [a, b](Tensor& self) {
    for (size_t i = 0; i < self.grad.size(); ++i) {
      a->grad[i] += self.grad[i] * b->value[i];
      b->grad[i] += self.grad[i] * a->value[i];
    }
  };
  return out;
}

TensorPtr divide(TensorPtr a, TensorPtr b) {
  require_same(a, b, "divide");
  auto out = Tensor::make(a->shape);
  for (size_t i = 0; i < out->value.size(); ++i) out->value[i] = a->value[i] / b->value[i];
  link(out, {a, b});
  out->backward_fn = [a, b](Tensor& self) {
    for (size_t i = 0; i < self.grad.size(); ++i) {
      const double inv = 1.0 / b->value[i];
      a->grad[i] += self.grad[i] * inv;
      b->grad[i] -= self.grad[i] * a->value[i] * inv * inv;
    }
  };
  return out;
}

TensorPtr add_const(TensorPtr a, double c) {
  auto out = Tensor::make(a->shape);
  for (size_t i = 0; i < out->value.size(); ++i) out->value[i] = a->value[i] + c;
  link(out, {a});
  out->backward_fn = [a](Tensor& self) {
    for (size_t i = 0; i < self.grad.size(); ++i) a->grad[i] += self.grad[i];
  };
  return out;
}

TensorPtr mul_const(TensorPtr a, double c) {
  auto out = Tensor::make(a->shape);
  for (size_t i = 0; i < out->value.size(); ++i) out->value[i] = a->value[i] * c;
  link(out, {a});
  out->backward_fn = [a, c](Tensor& self) {
    for (size_t i = 0; i < self.grad.size(); ++i) a->grad[i] += self.grad[i] * c;
  };
  return out;
}

TensorPtr log1p_elem(TensorPtr a) {
  auto out = Tensor::make(a->shape);
  for (size_t i = 0; i < out->value.size(); ++i) out->value[i] = std::log1p(a->value[i]);
  link(out, {a});
  out->backward_fn = [a](Tensor& self) {
    for (size_t i = 0; i < self.grad.size(); ++i)
      a->grad[i] += self.grad[i] / (1.0 + a->value[i]);
  };
  return out;
}

TensorPtr softplus(TensorPtr a) {
  auto out = Tensor::make(a->shape);
  for (size_t i = 0; i < out->value.size(); ++i) {
    const double x = a->value[i];
    out->value[i] = std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
  }
  link(out, {a});
  out->backward_fn = [a](Tensor& self) {
    for (size_t i = 0; i < self.grad.size(); ++i)
      a->grad[i] += self.grad[i] / (1.0 + std::exp(-a->value[i]));
  };
  return out;
}

TensorPtr activation(TensorPtr x, Activation kind) {
  const double slope = kind == Activation::relu ? 0.0 : 0.2;
  auto out = Tensor::make(x->shape);
  for (size_t i = 0; i < out->value.size(); ++i) {
    const double v = x->value[i];
    out->value[i] = v > 0.0 ? v : slope * v;
  }
  link(out, {x});
  out->backward_fn = [x, slope](Tensor& self) {
    for (size_t i = 0; i < self.grad.size(); ++i)
      x->grad[i] += self.grad[i] * (x->value[i] > 0.0 ? 1.0 : slope);
  };
  return out;
}

TensorPtr relu(TensorPtr x) { return activation(std::move(x), Activation::relu); }
TensorPtr leaky_relu(TensorPtr x) { return activation(std::move(x), Activation::leaky_relu); }

TensorPtr scale_by_scalar(TensorPtr t, TensorPtr s) {
  if (s->numel() != 1) throw shape_error("scale_by_scalar: scale must be scalar");
  auto out = Tensor::make(t->shape);
  const double sv = s->value[0];
  for (size_t i = 0; i < out->value.size(); ++i) out->value[i] = t->value[i] * sv;
  link(out, {t, s});
  out->backward_fn = [t, s](Tensor& self) {
    const double sv = s->value[0];
    double acc = 0.0;
    for (size_t i = 0; i < self.grad.size(); ++i) {
      t->grad[i] += self.grad[i] * sv;
      acc += self.grad[i] * t->value[i];
    }
    s->grad[0] += acc;
  };
  return out;
}

// ---------------------------------------------------------------------- conv

TensorPtr conv2d(TensorPtr input, TensorPtr kernel, TensorPtr bias) {
  if (input->shape.size() != 3 || kernel->shape.size() != 4 || bias->shape.size() != 1)
    throw shape_error("conv2d: expected input [Cin,H,W], kernel [Cout,Cin,kh,kw], bias [Cout]");
  const int cin = input->dim(0), h = input->dim(1), w = input->dim(2);
  const int cout = kernel->dim(0), kh = kernel->dim(2), kw = kernel->dim(3);
  if (kernel->dim(1) != cin) throw shape_error("conv2d: kernel Cin mismatch");
  if (bias->dim(0) != cout) throw shape_error("conv2d: bias Cout mismatch");
  if (kh % 2 == 0 || kw % 2 == 0) throw shape_error("conv2d: kernel dims must be odd");

  const int ph = kh / 2, pw = kw / 2;
  const size_t plane = static_cast<size_t>(h) * w;
  auto out = Tensor::make({cout, h, w});

  for (int co = 0; co < cout; ++co) {
    double* op = out->value.data() + co * plane;
    const double bv = bias->value[static_cast<size_t>(co)];
    for (size_t i = 0; i < plane; ++i) op[i] = bv;
    for (int ci = 0; ci < cin; ++ci) {
      const double* ip = input->value.data() + ci * plane;
      const double* kp = kernel->value.data() + (static_cast<size_t>(co) * cin + ci) * kh * kw;
      for (int ky = 0; ky < kh; ++ky) {
        const int dy = ky - ph;
        for (int kx = 0; kx < kw; ++kx) {
          const int dx = kx - pw;
          const double wv = kp[ky * kw + kx];
          if (wv == 0.0) continue;
          const int y0 = std::max(0, -dy), y1 = std::min(h, h - dy);
          const int x0 = std::max(0, -dx), x1 = std::min(w, w - dx);
          for (int y = y0; y < y1; ++y) {
            double* orow = op + static_cast<size_t>(y) * w;
            const double* irow = ip + static_cast<size_t>(y + dy) * w + dx;
            for (int x = x0; x < x1; ++x) orow[x] += wv * irow[x];
          }
        }
      }
    }
  }

  link(out, {input, kernel, bias});
  out->backward_fn = [input, kernel, bias, cin, cout, h, w, kh, kw, ph, pw,
                      plane](Tensor& self) {
    const double* gout = self.grad.data();
    for (int co = 0; co < cout; ++co) {
      const double* gp = gout + co * plane;
      double bacc = 0.0;
      for (size_t i = 0; i < plane; ++i) bacc += gp[i];
      bias->grad[static_cast<size_t>(co)] += bacc;
      for (int ci = 0; ci < cin; ++ci) {
        const double* ip = input->value.data() + ci * plane;
        double* gip = input->grad.data() + ci * plane;
        const size_t kbase = (static_cast<size_t>(co) * cin + ci) * kh * kw;
        for (int ky = 0; ky < kh; ++ky) {
          const int dy = ky - ph;
          for (int kx = 0; kx < kw; ++kx) {
            const int dx = kx - pw;
            const double wv = kernel->value[kbase + ky * kw + kx];
            const int y0 = std::max(0, -dy), y1 = std::min(h, h - dy);
            const int x0 = std::max(0, -dx), x1 = std::min(w, w - dx);
            double wacc = 0.0;
            for (int y = y0; y < y1; ++y) {
              const double* grow = gp + static_cast<size_t>(y) * w;
              const double* irow = ip + static_cast<size_t>(y + dy) * w + dx;
              double* girow = gip + static_cast<size_t>(y + dy) * w + dx;
              for (int x = x0; x < x1; ++x) {
                wacc += grow[x] * irow[x];
                girow[x] += wv * grow[x];
              }
            }
            kernel->grad[kbase + ky * kw + kx] += wacc;
          }
        }
      }
    }
  };
  return out;
}

// ----------------------------------------------------------------- resampling

TensorPtr avgpool2(TensorPtr x) {
  if (x->shape.size() != 3) throw shape_error("avgpool2: expected [C,H,W]");
  const int c = x->dim(0), h = x->dim(1), w = x->dim(2);
  if (h % 2 != 0 || w % 2 != 0) throw shape_error("avgpool2: H and W must be even");
  const int oh = h / 2, ow = w / 2;
  auto out = Tensor::make({c, oh, ow});
  for (int ci = 0; ci < c; ++ci)
    for (int y = 0; y < oh; ++y)
      for (int xx = 0; xx < ow; ++xx) {
        const size_t base = (static_cast<size_t>(ci) * h + 2 * y) * w + 2 * xx;
        out->value[(static_cast<size_t>(ci) * oh + y) * ow + xx] =
            0.25 * (x->value[base] + x->value[base + 1] + x->value[base + w] +
                    x->value[base + w + 1]);
      }
  link(out, {x});
  out->backward_fn = [x, c, h, w, oh, ow](Tensor& self) {
    for (int ci = 0; ci < c; ++ci)
      for (int y = 0; y < oh; ++y)
        for (int xx = 0; xx < ow; ++xx) {
          const double g = 0.25 * self.grad[(static_cast<size_t>(ci) * oh + y) * ow + xx];
          const size_t base = (static_cast<size_t>(ci) * h + 2 * y) * w + 2 * xx;
          x->grad[base] += g;
          x->grad[base + 1] += g;
          x->grad[base + w] += g;
          x->grad[base + w + 1] += g;
        }
  };
  return out;
}

TensorPtr upsample_nearest2(TensorPtr x) {
  if (x->shape.size() != 3) throw shape_error("upsample_nearest2: expected [C,H,W]");
  const int c = x->dim(0), h = x->dim(1), w = x->dim(2);
  const int oh = 2 * h, ow = 2 * w;
  auto out = Tensor::make({c, oh, ow});
  for (int ci = 0; ci < c; ++ci)
    for (int y = 0; y < h; ++y)
      for (int xx = 0; xx < w; ++xx) {
        const double v = x->value[(static_cast<size_t>(ci) * h + y) * w + xx];
        const size_t base = (static_cast<size_t>(ci) * oh + 2 * y) * ow + 2 * xx;
        out->value[base] = v;
        out->value[base + 1] = v;
        out->value[base + ow] = v;
        out->value[base + ow + 1] = v;
      }
  link(out, {x});
  out->backward_fn = [x, c, h, w, oh, ow](Tensor& self) {
    for (int ci = 0; ci < c; ++ci)
      for (int y = 0; y < h; ++y)
        for (int xx = 0; xx < w; ++xx) {
          const size_t base = (static_cast<size_t>(ci) * oh + 2 * y) * ow + 2 * xx;
          x->grad[(static_cast<size_t>(ci) * h + y) * w + xx] +=
              self.grad[base] + self.grad[base + 1] + self.grad[base + ow] +
              self.grad[base + ow + 1];
        }
  };
  return out;
}

TensorPtr resample(TensorPtr x, Resample mode) {
  return mode == Resample::avgpool2 ? avgpool2(std::move(x))
                                    : upsample_nearest2(std::move(x));
}

TensorPtr concat_channels(TensorPtr a, TensorPtr b) {
  if (a->shape.size() != 3 || b->shape.size() != 3 || a->dim(1) != b->dim(1) ||
      a->dim(2) != b->dim(2))
    throw shape_error("concat_channels: spatial dims must match");
  const int ca = a->dim(0), cb = b->dim(0);
  auto out = Tensor::make({ca + cb, a->dim(1), a->dim(2)});
  std::copy(a->value.begin(), a->value.end(), out->value.begin());
  std::copy(b->value.begin(), b->value.end(), out->value.begin() + a->value.size());
  link(out, {a, b});
  out->backward_fn = [a, b](Tensor& self) {
    const size_t na = a->grad.size();
    for (size_t i = 0; i < na; ++i) a->grad[i] += self.grad[i];
    for (size_t i = 0; i < b->grad.size(); ++i) b->grad[i] += self.grad[na + i];
  };
  return out;
}

TensorPtr reduce_mean(TensorPtr x) {
  auto out = Tensor::make({1});
  double acc = 0.0;
  for (double v : x->value) acc += v;
  const double inv = 1.0 / static_cast<double>(x->value.size());
  out->value[0] = acc * inv;
  link(out, {x});
  out->backward_fn = [x, inv](Tensor& self) {
    const double g = self.grad[0] * inv;
    for (size_t i = 0; i < x->grad.size(); ++i) x->grad[i] += g;
  };
  return out;
}

TensorPtr sum_channels(TensorPtr x) {
  if (x->shape.size() != 3) throw shape_error("sum_channels: expected [C,H,W]");
  const int c = x->dim(0);
  const size_t plane = static_cast<size_t>(x->dim(1)) * x->dim(2);
  auto out = Tensor::make({1, x->dim(1), x->dim(2)});
  for (int ci = 0; ci < c; ++ci)
    for (size_t i = 0; i < plane; ++i) out->value[i] += x->value[ci * plane + i];
  link(out, {x});
  out->backward_fn = [x, c, plane](Tensor& self) {
    for (int ci = 0; ci < c; ++ci)
      for (size_t i = 0; i < plane; ++i) x->grad[ci * plane + i] += self.grad[i];
  };
  return out;
}

TensorPtr window_mean_valid(TensorPtr x, int k) {
  if (x->shape.size() != 2) throw shape_error("window_mean_valid: expected [H,W]");
  const int h = x->dim(0), w = x->dim(1);
  if (k > h || k > w) throw shape_error("window_mean_valid: window larger than image");
  const int oh = h - k + 1, ow = w - k + 1;
  const double inv = 1.0 / (static_cast<double>(k) * k);
  auto out = Tensor::make({oh, ow});
  for (int y = 0; y < oh; ++y)
    for (int xx = 0; xx < ow; ++xx) {
      double acc = 0.0;
      for (int i = 0; i < k; ++i) {
        const double* row = x->value.data() + static_cast<size_t>(y + i) * w + xx;
        for (int j = 0; j < k; ++j) acc += row[j];
      }
      out->value[static_cast<size_t>(y) * ow + xx] = acc * inv;
    }
  link(out, {x});
  out->backward_fn = [x, k, w, oh, ow, inv](Tensor& self) {
    for (int y = 0; y < oh; ++y)
      for (int xx = 0; xx < ow; ++xx) {
        const double g = self.grad[static_cast<size_t>(y) * ow + xx] * inv;
        for (int i = 0; i < k; ++i) {
          double* row = x->grad.data() + static_cast<size_t>(y + i) * w + xx;
          for (int j = 0; j < k; ++j) row[j] += g;
        }
      }
  };
  return out;
}

TensorPtr standardize(TensorPtr x, double eps) {
  const size_t n = x->value.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  double mu = 0;
  for (double v : x->value) mu += v;
  mu *= inv_n;
  double var = 0;
  for (double v : x->value) var += (v - mu) * (v - mu);
  var = var * inv_n + eps;
  const double sigma = std::sqrt(var);

  auto out = Tensor::make(x->shape);
  for (size_t i = 0; i < n; ++i) out->value[i] = (x->value[i] - mu) / sigma;
  link(out, {x});
  out->backward_fn = [x, sigma, inv_n](Tensor& self) {
    double gmean = 0, gdot = 0;
    for (size_t i = 0; i < self.grad.size(); ++i) {
      gmean += self.grad[i];
      gdot += self.grad[i] * self.value[i];
    }
    gmean *= inv_n;
    gdot *= inv_n;
    for (size_t i = 0; i < self.grad.size(); ++i)
      x->grad[i] += (self.grad[i] - gmean - self.value[i] * gdot) / sigma;
  };
  return out;
}

// ------------------------------------------------------------------- complex

namespace {

void check_complex(const TensorPtr& t, const char* op) {
  if (t->shape.empty() || t->shape.back() != 2)
    throw shape_error(std::string(op) + ": expected trailing complex axis of 2");
}

// shared implementation: unitary centered FFT, adjoint = inverse direction
TensorPtr fft_op_impl(TensorPtr k, bool inverse) {
  check_complex(k, "fft2c_op");
  if (k->shape.size() != 4) throw shape_error("fft2c_op: expected [C,H,W,2]");
  const int c = k->dim(0), h = k->dim(1), w = k->dim(2);
  auto out = Tensor::make(k->shape);
  {
    std::vector<cplx> buf = as_complex(k->value);
    fft2c_buffer(buf.data(), buf.data(), c, h, w, inverse);
    from_complex(buf, out->value);
  }
  link(out, {k});
  out->backward_fn = [k, c, h, w, inverse](Tensor& self) {
    std::vector<cplx> g = as_complex(self.grad);
    fft2c_buffer(g.data(), g.data(), c, h, w, !inverse);
    for (size_t i = 0; i < g.size(); ++i) {
      k->grad[2 * i] += g[i].real();
      k->grad[2 * i + 1] += g[i].imag();
    }
  };
  return out;
}

}  // namespace

TensorPtr fft2c_op(TensorPtr k) { return fft_op_impl(std::move(k), false); }
TensorPtr ifft2c_op(TensorPtr k) { return fft_op_impl(std::move(k), true); }

TensorPtr sense_expand_op(TensorPtr x, std::shared_ptr<const SensitivityMaps> maps) {
  check_complex(x, "sense_expand_op");
  if (x->shape.size() != 3 || x->dim(0) != maps->h || x->dim(1) != maps->w)
    throw shape_error("sense_expand_op: expected [H,W,2] matching maps");
  const int c = maps->c;
  const size_t n = static_cast<size_t>(maps->h) * maps->w;
  auto out = Tensor::make({c, maps->h, maps->w, 2});
  for (int ci = 0; ci < c; ++ci)
    for (size_t i = 0; i < n; ++i) {
      const cplx s = maps->data[ci * n + i];
      const cplx v(x->value[2 * i], x->value[2 * i + 1]);
      const cplx r = s * v;
      out->value[2 * (ci * n + i)] = r.real();
      out->value[2 * (ci * n + i) + 1] = r.imag();
    }
  link(out, {x});
  out->backward_fn = [x, maps, c, n](Tensor& self) {
    // adjoint: sum_c conj(S_c) * g_c
    for (size_t i = 0; i < n; ++i) {
      cplx acc(0, 0);
      for (int ci = 0; ci < c; ++ci) {
        const cplx g(self.grad[2 * (ci * n + i)], self.grad[2 * (ci * n + i) + 1]);
        acc += std::conj(maps->data[ci * n + i]) * g;
      }
      x->grad[2 * i] += acc.real();
      x->grad[2 * i + 1] += acc.imag();
    }
  };
  return out;
}

TensorPtr sense_combine_op(TensorPtr y, std::shared_ptr<const SensitivityMaps> maps) {
  check_complex(y, "sense_combine_op");
  if (y->shape.size() != 4 || y->dim(0) != maps->c || y->dim(1) != maps->h ||
      y->dim(2) != maps->w)
    throw shape_error("sense_combine_op: expected [C,H,W,2] matching maps");
  const int c = maps->c;
  const size_t n = static_cast<size_t>(maps->h) * maps->w;
  auto out = Tensor::make({maps->h, maps->w, 2});
  for (size_t i = 0; i < n; ++i) {
    cplx acc(0, 0);
    for (int ci = 0; ci < c; ++ci) {
      const cplx v(y->value[2 * (ci * n + i)], y->value[2 * (ci * n + i) + 1]);
      acc += std::conj(maps->data[ci * n + i]) * v;
    }
    out->value[2 * i] = acc.real();
    out->value[2 * i + 1] = acc.imag();
  }
  link(out, {y});
  out->backward_fn = [y, maps, c, n](Tensor& self) {
    // adjoint: g_c = S_c * g
    for (size_t i = 0; i < n; ++i) {
      const cplx g(self.grad[2 * i], self.grad[2 * i + 1]);
      for (int ci = 0; ci < c; ++ci) {
        const cplx r = maps->data[ci * n + i] * g;
        y->grad[2 * (ci * n + i)] += r.real();
        y->grad[2 * (ci * n + i) + 1] += r.imag();
      }
    }
  };
  return out;
}

TensorPtr mask_columns_op(TensorPtr k, std::shared_ptr<const SamplingMask> mask) {
  check_complex(k, "mask_columns_op");
  if (k->shape.size() != 4 || k->dim(2) != mask->w)
    throw shape_error("mask_columns_op: expected [C,H,W,2] matching mask width");
  const int c = k->dim(0), h = k->dim(1), w = k->dim(2);
  auto out = Tensor::make(k->shape);
  for (int ci = 0; ci < c; ++ci)
    for (int r = 0; r < h; ++r)
      for (int cc = 0; cc < w; ++cc)
        if (mask->sampled(cc)) {
          const size_t idx = 2 * ((static_cast<size_t>(ci) * h + r) * w + cc);
          out->value[idx] = k->value[idx];
          out->value[idx + 1] = k->value[idx + 1];
        }
  link(out, {k});
  out->backward_fn = [k, mask, c, h, w](Tensor& self) {
    for (int ci = 0; ci < c; ++ci)
      for (int r = 0; r < h; ++r)
        for (int cc = 0; cc < w; ++cc)
          if (mask->sampled(cc)) {
            const size_t idx = 2 * ((static_cast<size_t>(ci) * h + r) * w + cc);
            k->grad[idx] += self.grad[idx];
            k->grad[idx + 1] += self.grad[idx + 1];
          }
  };
  return out;
}

TensorPtr complex_abs(TensorPtr k) {
  check_complex(k, "complex_abs");
  std::vector<int> shape(k->shape.begin(), k->shape.end() - 1);
  auto out = Tensor::make(shape);
  for (size_t i = 0; i < out->value.size(); ++i)
    out->value[i] = std::hypot(k->value[2 * i], k->value[2 * i + 1]);
  link(out, {k});
  out->backward_fn = [k](Tensor& self) {
    for (size_t i = 0; i < self.grad.size(); ++i) {
      const double m = self.value[i];
      if (m == 0.0) continue;  // subgradient 0 at the origin
      const double g = self.grad[i] / m;
      k->grad[2 * i] += g * k->value[2 * i];
      k->grad[2 * i + 1] += g * k->value[2 * i + 1];
    }
  };
  return out;
}

TensorPtr rss_op(TensorPtr y) {
  check_complex(y, "rss_op");
  if (y->shape.size() != 4) throw shape_error("rss_op: expected [C,H,W,2]");
  const int c = y->dim(0);
  const size_t n = static_cast<size_t>(y->dim(1)) * y->dim(2);
  auto out = Tensor::make({y->dim(1), y->dim(2)});
  for (size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int ci = 0; ci < c; ++ci) {
      const double re = y->value[2 * (ci * n + i)];
      const double im = y->value[2 * (ci * n + i) + 1];
      acc += re * re + im * im;
    }
    out->value[i] = std::sqrt(acc);
  }
  link(out, {y});
  out->backward_fn = [y, c, n](Tensor& self) {
    for (size_t i = 0; i < n; ++i) {
      const double r = self.value[i];
      if (r == 0.0) continue;
      const double g = self.grad[i] / r;
      for (int ci = 0; ci < c; ++ci) {
        y->grad[2 * (ci * n + i)] += g * y->value[2 * (ci * n + i)];
        y->grad[2 * (ci * n + i) + 1] += g * y->value[2 * (ci * n + i) + 1];
      }
    }
  };
  return out;
}

TensorPtr complex_to_channels(TensorPtr x) {
  check_complex(x, "complex_to_channels");
  if (x->shape.size() != 3) throw shape_error("complex_to_channels: expected [H,W,2]");
  const size_t n = static_cast<size_t>(x->dim(0)) * x->dim(1);
  auto out = Tensor::make({2, x->dim(0), x->dim(1)});
  for (size_t i = 0; i < n; ++i) {
    out->value[i] = x->value[2 * i];
    out->value[n + i] = x->value[2 * i + 1];
  }
  link(out, {x});
  out->backward_fn = [x, n](Tensor& self) {
    for (size_t i = 0; i < n; ++i) {
      x->grad[2 * i] += self.grad[i];
      x->grad[2 * i + 1] += self.grad[n + i];
    }
  };
  return out;
}

TensorPtr channels_to_complex(TensorPtr x) {
  if (x->shape.size() != 3 || x->dim(0) != 2)
    throw shape_error("channels_to_complex: expected [2,H,W]");
  const size_t n = static_cast<size_t>(x->dim(1)) * x->dim(2);
  auto out = Tensor::make({x->dim(1), x->dim(2), 2});
  for (size_t i = 0; i < n; ++i) {
    out->value[2 * i] = x->value[i];
    out->value[2 * i + 1] = x->value[n + i];
  }
  link(out, {x});
  out->backward_fn = [x, n](Tensor& self) {
    for (size_t i = 0; i < n; ++i) {
      x->grad[i] += self.grad[2 * i];
      x->grad[n + i] += self.grad[2 * i + 1];
    }
  };
  return out;
}

// --------------------------------------------------------------- conversions

TensorPtr tensor_from_kspace(const KSpace& k) {
  auto t = Tensor::make({k.c, k.h, k.w, 2});
  from_complex(k.data, t->value);
  return t;
}

KSpace kspace_from_tensor(const Tensor& t) {
  if (t.shape.size() != 4 || t.shape[3] != 2)
    throw shape_error("kspace_from_tensor: expected [C,H,W,2]");
  KSpace k(t.shape[0], t.shape[1], t.shape[2]);
  k.data = as_complex(t.value);
  return k;
}

TensorPtr tensor_from_real(const RealImage& img) {
  return Tensor::from_values({img.h, img.w}, img.data);
}

RealImage real_from_tensor(const Tensor& t) {
  if (t.shape.size() != 2) throw shape_error("real_from_tensor: expected [H,W]");
  RealImage img(t.shape[0], t.shape[1]);
  img.data = t.value;
  return img;
}

}  // namespace mri::nn
