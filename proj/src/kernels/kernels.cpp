#include "maple/kernels/kernels.hpp"

#include <omp.h>

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

namespace maple::kernels {

namespace {
int g_threads = 0;
int effective_threads() { return g_threads > 0 ? g_threads : omp_get_max_threads(); }
}  // namespace

void set_threads(int n) { g_threads = n; }
int threads() { return effective_threads(); }

void matmul_serial(const double* A, const double* B, double* C, int n, int k, int m,
                   bool ta, bool tb) {
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      double acc = 0.0;
      for (int p = 0; p < k; ++p) {
        double a = ta ? A[p * n + i] : A[i * k + p];
        double b = tb ? B[j * k + p] : B[p * m + j];
        acc += a * b;
      }
      C[i * m + j] = acc;
    }
  }
}

void matmul_omp(const double* A, const double* B, double* C, int n, int k, int m,
                bool ta, bool tb) {
#pragma omp parallel for schedule(static) num_threads(effective_threads())
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      double acc = 0.0;
      for (int p = 0; p < k; ++p) {
        double a = ta ? A[p * n + i] : A[i * k + p];
        double b = tb ? B[j * k + p] : B[p * m + j];
        acc += a * b;
      }
      C[i * m + j] = acc;
    }
  }
}

void matmul(const double* A, const double* B, double* C, int n, int k, int m,
            bool ta, bool tb) {
  // Spawning threads costs more than tiny products do.
  if (static_cast<long long>(n) * k * m < 32768 || effective_threads() == 1)
    matmul_serial(A, B, C, n, k, m, ta, tb);
  else
    matmul_omp(A, B, C, n, k, m, ta, tb);
}

namespace {

inline double conv_cell(const Conv3dShape& s, const double* x, const double* wgt,
                        const double* bias, int co, int zo, int yo, int xo) {
  double acc = bias ? bias[co] : 0.0;
  const int z0 = zo * s.stride - s.pad;
  const int y0 = yo * s.stride - s.pad;
  const int x0 = xo * s.stride - s.pad;
  for (int ci = 0; ci < s.cin; ++ci) {
    const double* xc = x + static_cast<std::size_t>(ci) * s.d * s.h * s.w;
    const double* wc = wgt + ((static_cast<std::size_t>(co) * s.cin + ci) * s.k * s.k * s.k);
    for (int kz = 0; kz < s.k; ++kz) {
      int z = z0 + kz;
      if (z < 0 || z >= s.d) continue;
      for (int ky = 0; ky < s.k; ++ky) {
        int y = y0 + ky;
        if (y < 0 || y >= s.h) continue;
        for (int kx = 0; kx < s.k; ++kx) {
          int xx = x0 + kx;
          if (xx < 0 || xx >= s.w) continue;
          acc += xc[(z * s.h + y) * s.w + xx] * wc[(kz * s.k + ky) * s.k + kx];
        }
      }
    }
  }
  return acc;
}

}  // namespace

void conv3d_forward_serial(const Conv3dShape& s, const double* x, const double* wgt,
                           const double* bias, double* y) {
  const int od = s.od(), oh = s.oh(), ow = s.ow();
  for (int co = 0; co < s.cout; ++co)
    for (int zo = 0; zo < od; ++zo)
      for (int yo = 0; yo < oh; ++yo)
        for (int xo = 0; xo < ow; ++xo)
          y[((static_cast<std::size_t>(co) * od + zo) * oh + yo) * ow + xo] =
              conv_cell(s, x, wgt, bias, co, zo, yo, xo);
}

void conv3d_forward_omp(const Conv3dShape& s, const double* x, const double* wgt,
                        const double* bias, double* y) {
  const int od = s.od(), oh = s.oh(), ow = s.ow();
  const int total = s.cout * od;
#pragma omp parallel for schedule(static) num_threads(effective_threads())
  for (int t = 0; t < total; ++t) {
    const int co = t / od, zo = t % od;
    for (int yo = 0; yo < oh; ++yo)
      for (int xo = 0; xo < ow; ++xo)
        y[((static_cast<std::size_t>(co) * od + zo) * oh + yo) * ow + xo] =
            conv_cell(s, x, wgt, bias, co, zo, yo, xo);
  }
}

void conv3d_forward(const Conv3dShape& s, const double* x, const double* wgt,
                    const double* bias, double* y) {
  const long long work = static_cast<long long>(s.cout) * s.od() * s.oh() * s.ow() *
                         s.cin * s.k * s.k * s.k;
  if (work < 65536 || effective_threads() == 1)
    conv3d_forward_serial(s, x, wgt, bias, y);
  else
    conv3d_forward_omp(s, x, wgt, bias, y);
}

void conv3d_backward_input_serial(const Conv3dShape& s, const double* dy, const double* wgt,
                                  double* dx) {
  const int od = s.od(), oh = s.oh(), ow = s.ow();
  for (int co = 0; co < s.cout; ++co)
    for (int zo = 0; zo < od; ++zo)
      for (int yo = 0; yo < oh; ++yo)
        for (int xo = 0; xo < ow; ++xo) {
          const double g = dy[((static_cast<std::size_t>(co) * od + zo) * oh + yo) * ow + xo];
          if (g == 0.0) continue;
          const int z0 = zo * s.stride - s.pad;
          const int y0 = yo * s.stride - s.pad;
          const int x0 = xo * s.stride - s.pad;
          for (int ci = 0; ci < s.cin; ++ci) {
            double* dxc = dx + static_cast<std::size_t>(ci) * s.d * s.h * s.w;
            const double* wc =
                wgt + ((static_cast<std::size_t>(co) * s.cin + ci) * s.k * s.k * s.k);
            for (int kz = 0; kz < s.k; ++kz) {
              int z = z0 + kz;
              if (z < 0 || z >= s.d) continue;
              for (int ky = 0; ky < s.k; ++ky) {
                int y = y0 + ky;
                if (y < 0 || y >= s.h) continue;
                for (int kx = 0; kx < s.k; ++kx) {
                  int xx = x0 + kx;
                  if (xx < 0 || xx >= s.w) continue;
                  dxc[(z * s.h + y) * s.w + xx] += g * wc[(kz * s.k + ky) * s.k + kx];
                }
              }
            }
          }
        }
}

void conv3d_backward_input(const Conv3dShape& s, const double* dy, const double* wgt,
                           double* dx) {
  const int n = s.cin * s.d * s.h * s.w;
  const int od = s.od(), oh = s.oh(), ow = s.ow();
  if (static_cast<long long>(n) * s.cout * s.k * s.k * s.k < 65536 ||
      effective_threads() == 1) {
    conv3d_backward_input_serial(s, dy, wgt, dx);
    return;
  }
  // Gather form: each input voxel sums the output cells whose window covers it,
  // so threads never write the same element.
#pragma omp parallel for schedule(static) num_threads(effective_threads())
  for (int ci = 0; ci < s.cin; ++ci) {
    double* dxc = dx + static_cast<std::size_t>(ci) * s.d * s.h * s.w;
    for (int z = 0; z < s.d; ++z)
      for (int y = 0; y < s.h; ++y)
        for (int xx = 0; xx < s.w; ++xx) {
          double acc = 0.0;
          for (int co = 0; co < s.cout; ++co) {
            const double* wc =
                wgt + ((static_cast<std::size_t>(co) * s.cin + ci) * s.k * s.k * s.k);
            const double* dyc = dy + static_cast<std::size_t>(co) * od * oh * ow;
            for (int kz = 0; kz < s.k; ++kz) {
              int zn = z + s.pad - kz;
              if (zn < 0 || zn % s.stride) continue;
              int zo = zn / s.stride;
              if (zo >= od) continue;
              for (int ky = 0; ky < s.k; ++ky) {
                int yn = y + s.pad - ky;
                if (yn < 0 || yn % s.stride) continue;
                int yo = yn / s.stride;
                if (yo >= oh) continue;
                for (int kx = 0; kx < s.k; ++kx) {
                  int xn = xx + s.pad - kx;
                  if (xn < 0 || xn % s.stride) continue;
                  int xo = xn / s.stride;
                  if (xo >= ow) continue;
                  acc += dyc[(zo * oh + yo) * ow + xo] * wc[(kz * s.k + ky) * s.k + kx];
                }
              }
            }
          }
          dxc[(z * s.h + y) * s.w + xx] += acc;
        }
  }
}

void conv3d_backward_weight_serial(const Conv3dShape& s, const double* dy, const double* x,
                                   double* dwgt, double* dbias) {
  const int od = s.od(), oh = s.oh(), ow = s.ow();
  for (int co = 0; co < s.cout; ++co) {
    const double* dyc = dy + static_cast<std::size_t>(co) * od * oh * ow;
    if (dbias) {
      double acc = 0.0;
      for (int i = 0; i < od * oh * ow; ++i) acc += dyc[i];
      dbias[co] += acc;
    }
    for (int ci = 0; ci < s.cin; ++ci) {
      const double* xc = x + static_cast<std::size_t>(ci) * s.d * s.h * s.w;
      double* dwc = dwgt + ((static_cast<std::size_t>(co) * s.cin + ci) * s.k * s.k * s.k);
      for (int kz = 0; kz < s.k; ++kz)
        for (int ky = 0; ky < s.k; ++ky)
          for (int kx = 0; kx < s.k; ++kx) {
            double acc = 0.0;
            for (int zo = 0; zo < od; ++zo) {
              int z = zo * s.stride - s.pad + kz;
              if (z < 0 || z >= s.d) continue;
              for (int yo = 0; yo < oh; ++yo) {
                int y = yo * s.stride - s.pad + ky;
                if (y < 0 || y >= s.h) continue;
                for (int xo = 0; xo < ow; ++xo) {
                  int xx = xo * s.stride - s.pad + kx;
                  if (xx < 0 || xx >= s.w) continue;
                  acc += dyc[(zo * oh + yo) * ow + xo] * xc[(z * s.h + y) * s.w + xx];
                }
              }
            }
            dwc[(kz * s.k + ky) * s.k + kx] += acc;
          }
    }
  }
}

void conv3d_backward_weight(const Conv3dShape& s, const double* dy, const double* x,
                            double* dwgt, double* dbias) {
  if (s.cout < 2 || effective_threads() == 1) {
    conv3d_backward_weight_serial(s, dy, x, dwgt, dbias);
    return;
  }
#pragma omp parallel for schedule(static) num_threads(effective_threads())
  for (int co = 0; co < s.cout; ++co) {
    Conv3dShape one = s;
    one.cout = 1;
    const int od = s.od(), oh = s.oh(), ow = s.ow();
    conv3d_backward_weight_serial(
        one, dy + static_cast<std::size_t>(co) * od * oh * ow, x,
        dwgt + static_cast<std::size_t>(co) * s.cin * s.k * s.k * s.k,
        dbias ? dbias + co : nullptr);
  }
}

void convt3d_forward_serial(const ConvT3dShape& s, const double* x, const double* wgt,
                            const double* bias, double* y) {
  const int od = s.od(), oh = s.oh(), ow = s.ow();
  for (int co = 0; co < s.cout; ++co) {
    double* yc = y + static_cast<std::size_t>(co) * od * oh * ow;
    for (int zo = 0; zo < od; ++zo)
      for (int yo = 0; yo < oh; ++yo)
        for (int xo = 0; xo < ow; ++xo) {
          double acc = bias ? bias[co] : 0.0;
          for (int ci = 0; ci < s.cin; ++ci) {
            const double* xc = x + static_cast<std::size_t>(ci) * s.d * s.h * s.w;
            const double* wc =
                wgt + ((static_cast<std::size_t>(ci) * s.cout + co) * s.k * s.k * s.k);
            for (int kz = 0; kz < s.k; ++kz) {
              int zn = zo + s.pad - kz;
              if (zn < 0 || zn % s.stride) continue;
              int zi = zn / s.stride;
              if (zi >= s.d) continue;
              for (int ky = 0; ky < s.k; ++ky) {
                int yn = yo + s.pad - ky;
                if (yn < 0 || yn % s.stride) continue;
                int yi = yn / s.stride;
                if (yi >= s.h) continue;
                for (int kx = 0; kx < s.k; ++kx) {
                  int xn = xo + s.pad - kx;
                  if (xn < 0 || xn % s.stride) continue;
                  int xi = xn / s.stride;
                  if (xi >= s.w) continue;
                  acc += xc[(zi * s.h + yi) * s.w + xi] * wc[(kz * s.k + ky) * s.k + kx];
                }
              }
            }
          }
          yc[(zo * oh + yo) * ow + xo] = acc;
        }
  }
}

void convt3d_forward(const ConvT3dShape& s, const double* x, const double* wgt,
                     const double* bias, double* y) {
  const int od = s.od(), oh = s.oh(), ow = s.ow();
  const long long work =
      static_cast<long long>(s.cout) * od * oh * ow * s.cin * s.k * s.k * s.k;
  if (work < 65536 || effective_threads() == 1) {
    convt3d_forward_serial(s, x, wgt, bias, y);
    return;
  }
#pragma omp parallel for schedule(static) num_threads(effective_threads())
  for (int co = 0; co < s.cout; ++co) {
    double* yc = y + static_cast<std::size_t>(co) * od * oh * ow;
    for (int zo = 0; zo < od; ++zo)
      for (int yo = 0; yo < oh; ++yo)
        for (int xo = 0; xo < ow; ++xo) {
          double acc = bias ? bias[co] : 0.0;
          for (int ci = 0; ci < s.cin; ++ci) {
            const double* xc = x + static_cast<std::size_t>(ci) * s.d * s.h * s.w;
            const double* wc =
                wgt + ((static_cast<std::size_t>(ci) * s.cout + co) * s.k * s.k * s.k);
            for (int kz = 0; kz < s.k; ++kz) {
              int zn = zo + s.pad - kz;
              if (zn < 0 || zn % s.stride) continue;
              int zi = zn / s.stride;
              if (zi >= s.d) continue;
              for (int ky = 0; ky < s.k; ++ky) {
                int yn = yo + s.pad - ky;
                if (yn < 0 || yn % s.stride) continue;
                int yi = yn / s.stride;
                if (yi >= s.h) continue;
                for (int kx = 0; kx < s.k; ++kx) {
                  int xn = xo + s.pad - kx;
                  if (xn < 0 || xn % s.stride) continue;
                  int xi = xn / s.stride;
                  if (xi >= s.w) continue;
                  acc += xc[(zi * s.h + yi) * s.w + xi] * wc[(kz * s.k + ky) * s.k + kx];
                }
              }
            }
          }
          yc[(zo * oh + yo) * ow + xo] = acc;
        }
  }
}

void convt3d_backward_input(const ConvT3dShape& s, const double* dy, const double* wgt,
                            double* dx) {
  // d(convT)/dx is an ordinary strided convolution of dy with the same kernel.
  const int od = s.od(), oh = s.oh(), ow = s.ow();
#pragma omp parallel for schedule(static) num_threads(effective_threads())
  for (int ci = 0; ci < s.cin; ++ci) {
    double* dxc = dx + static_cast<std::size_t>(ci) * s.d * s.h * s.w;
    for (int zi = 0; zi < s.d; ++zi)
      for (int yi = 0; yi < s.h; ++yi)
        for (int xi = 0; xi < s.w; ++xi) {
          double acc = 0.0;
          for (int co = 0; co < s.cout; ++co) {
            const double* dyc = dy + static_cast<std::size_t>(co) * od * oh * ow;
            const double* wc =
                wgt + ((static_cast<std::size_t>(ci) * s.cout + co) * s.k * s.k * s.k);
            for (int kz = 0; kz < s.k; ++kz) {
              int zo = zi * s.stride - s.pad + kz;
              if (zo < 0 || zo >= od) continue;
              for (int ky = 0; ky < s.k; ++ky) {
                int yo = yi * s.stride - s.pad + ky;
                if (yo < 0 || yo >= oh) continue;
                for (int kx = 0; kx < s.k; ++kx) {
                  int xo = xi * s.stride - s.pad + kx;
                  if (xo < 0 || xo >= ow) continue;
                  acc += dyc[(zo * oh + yo) * ow + xo] * wc[(kz * s.k + ky) * s.k + kx];
                }
              }
            }
          }
          dxc[(zi * s.h + yi) * s.w + xi] += acc;
        }
  }
}

void convt3d_backward_weight(const ConvT3dShape& s, const double* dy, const double* x,
                             double* dwgt, double* dbias) {
  const int od = s.od(), oh = s.oh(), ow = s.ow();
  if (dbias) {
    for (int co = 0; co < s.cout; ++co) {
      const double* dyc = dy + static_cast<std::size_t>(co) * od * oh * ow;
      double acc = 0.0;
      for (int i = 0; i < od * oh * ow; ++i) acc += dyc[i];
      dbias[co] += acc;
    }
  }
#pragma omp parallel for schedule(static) num_threads(effective_threads())
  for (int ci = 0; ci < s.cin; ++ci) {
    const double* xc = x + static_cast<std::size_t>(ci) * s.d * s.h * s.w;
    for (int co = 0; co < s.cout; ++co) {
      const double* dyc = dy + static_cast<std::size_t>(co) * od * oh * ow;
      double* dwc = dwgt + ((static_cast<std::size_t>(ci) * s.cout + co) * s.k * s.k * s.k);
      for (int kz = 0; kz < s.k; ++kz)
        for (int ky = 0; ky < s.k; ++ky)
          for (int kx = 0; kx < s.k; ++kx) {
            double acc = 0.0;
            for (int zi = 0; zi < s.d; ++zi) {
              int zo = zi * s.stride - s.pad + kz;
              if (zo < 0 || zo >= od) continue;
              for (int yi = 0; yi < s.h; ++yi) {
                int yo = yi * s.stride - s.pad + ky;
                if (yo < 0 || yo >= oh) continue;
                for (int xi = 0; xi < s.w; ++xi) {
                  int xo = xi * s.stride - s.pad + kx;
                  if (xo < 0 || xo >= ow) continue;
                  acc += dyc[(zo * oh + yo) * ow + xo] * xc[(zi * s.h + yi) * s.w + xi];
                }
              }
            }
            dwc[(kz * s.k + ky) * s.k + kx] += acc;
          }
    }
  }
}

void pairwise_cosine_serial(const double* X, int n, int m, double* S) {
  std::vector<double> norms(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < m; ++j) acc += X[i * m + j] * X[i * m + j];
    if (acc == 0.0) throw std::domain_error("pairwise_cosine: zero row");
    norms[i] = std::sqrt(acc);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int p = 0; p < m; ++p) acc += X[i * m + p] * X[j * m + p];
      S[i * n + j] = acc / (norms[i] * norms[j]);
    }
}

void pairwise_cosine(const double* X, int n, int m, double* S) {
  if (static_cast<long long>(n) * n * m < 65536 || effective_threads() == 1) {
    pairwise_cosine_serial(X, n, m, S);
    return;
  }
  std::vector<double> norms(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < m; ++j) acc += X[i * m + j] * X[i * m + j];
    if (acc == 0.0) throw std::domain_error("pairwise_cosine: zero row");
    norms[i] = std::sqrt(acc);
  }
#pragma omp parallel for schedule(static) num_threads(effective_threads())
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int p = 0; p < m; ++p) acc += X[i * m + p] * X[j * m + p];
      S[i * n + j] = acc / (norms[i] * norms[j]);
    }
}

}  // namespace maple::kernels
