#pragma once

#include <cblas.h>

namespace adcsr {

// Row-major C[m x n] = A[m x k] * B[k x n] (+ beta*C). Thin dispatch over the
// two numeric modes; OpenBLAS keeps a fixed per-element reduction order, so
// results are deterministic for a given build and thread count.
inline void gemm(int m, int n, int k, float alpha, const float* a, const float* b, float beta,
                 float* c) {
    cblas_sgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, m, n, k, alpha, a, k, b, n, beta, c, n);
}

inline void gemm(int m, int n, int k, double alpha, const double* a, const double* b, double beta,
                 double* c) {
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, m, n, k, alpha, a, k, b, n, beta, c, n);
}

// C[m x n] = A^T[m x k] * B[k x n], with A stored [k x m].
inline void gemm_at(int m, int n, int k, float alpha, const float* a, const float* b, float beta,
                    float* c) {
    cblas_sgemm(CblasRowMajor, CblasTrans, CblasNoTrans, m, n, k, alpha, a, m, b, n, beta, c, n);
}

inline void gemm_at(int m, int n, int k, double alpha, const double* a, const double* b,
                    double beta, double* c) {
    cblas_dgemm(CblasRowMajor, CblasTrans, CblasNoTrans, m, n, k, alpha, a, m, b, n, beta, c, n);
}

// C[m x n] = A[m x k] * B^T[k x n], with B stored [n x k].
inline void gemm_bt(int m, int n, int k, float alpha, const float* a, const float* b, float beta,
                    float* c) {
    cblas_sgemm(CblasRowMajor, CblasNoTrans, CblasTrans, m, n, k, alpha, a, k, b, k, beta, c, n);
}

inline void gemm_bt(int m, int n, int k, double alpha, const double* a, const double* b,
                    double beta, double* c) {
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasTrans, m, n, k, alpha, a, k, b, k, beta, c, n);
}

}  // namespace adcsr
