#pragma once

#include <cstddef>

namespace maple::kernels {

// Thread budget for all parallel kernels. 0 = library default. Each output
// element is produced by exactly one thread in a fixed inner order, so results
// are bit-identical for any thread count.
void set_threads(int n);
int threads();

// C[n,m] = op(A) * op(B), op controlled by ta/tb. A is [n,k] (or [k,n] when
// ta), B is [k,m] (or [m,k] when tb). C is overwritten.
void matmul(const double* A, const double* B, double* C, int n, int k, int m,
            bool ta, bool tb);
void matmul_serial(const double* A, const double* B, double* C, int n, int k, int m,
                   bool ta, bool tb);
void matmul_omp(const double* A, const double* B, double* C, int n, int k, int m,
                bool ta, bool tb);

struct Conv3dShape {
  int cin = 1, cout = 1;
  int d = 1, h = 1, w = 1;    // input spatial dims
  int k = 3;                  // cubic kernel edge
  int stride = 1;
  int pad = 1;

  int od() const { return (d + 2 * pad - k) / stride + 1; }
  int oh() const { return (h + 2 * pad - k) / stride + 1; }
  int ow() const { return (w + 2 * pad - k) / stride + 1; }
};

// x: [cin, d, h, w], wgt: [cout, cin, k, k, k], bias: [cout] (may be null),
// y: [cout, od, oh, ow].
void conv3d_forward(const Conv3dShape& s, const double* x, const double* wgt,
                    const double* bias, double* y);
void conv3d_forward_serial(const Conv3dShape& s, const double* x, const double* wgt,
                           const double* bias, double* y);
void conv3d_forward_omp(const Conv3dShape& s, const double* x, const double* wgt,
                        const double* bias, double* y);

// Gradients given dy: [cout, od, oh, ow]. dx/dwgt/dbias are accumulated into.
void conv3d_backward_input(const Conv3dShape& s, const double* dy, const double* wgt,
                           double* dx);
void conv3d_backward_input_serial(const Conv3dShape& s, const double* dy, const double* wgt,
                                  double* dx);
void conv3d_backward_weight(const Conv3dShape& s, const double* dy, const double* x,
                            double* dwgt, double* dbias);
void conv3d_backward_weight_serial(const Conv3dShape& s, const double* dy, const double* x,
                                   double* dwgt, double* dbias);

struct ConvT3dShape {
  int cin = 1, cout = 1;
  int d = 1, h = 1, w = 1;    // input spatial dims
  int k = 3;
  int stride = 2;
  int pad = 1;
  int out_pad = 1;

  int od() const { return (d - 1) * stride - 2 * pad + k + out_pad; }
  int oh() const { return (h - 1) * stride - 2 * pad + k + out_pad; }
  int ow() const { return (w - 1) * stride - 2 * pad + k + out_pad; }
};

// Transposed convolution. x: [cin, d, h, w], wgt: [cin, cout, k, k, k],
// y: [cout, od, oh, ow].
void convt3d_forward(const ConvT3dShape& s, const double* x, const double* wgt,
                     const double* bias, double* y);
void convt3d_forward_serial(const ConvT3dShape& s, const double* x, const double* wgt,
                            const double* bias, double* y);
void convt3d_backward_input(const ConvT3dShape& s, const double* dy, const double* wgt,
                            double* dx);
void convt3d_backward_weight(const ConvT3dShape& s, const double* dy, const double* x,
                             double* dwgt, double* dbias);

// S[i,j] = cosine similarity of rows i and j of X [n,m]. Rows must be nonzero.
void pairwise_cosine(const double* X, int n, int m, double* S);
void pairwise_cosine_serial(const double* X, int n, int m, double* S);

}  // namespace maple::kernels
