#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace bq::kern {

// Hot inner loops of the projection/evolution pipeline. Complex data is kept in
// split (re, im) arrays; every kernel has a scalar reference and an AVX2 variant
// selected once at startup (override with BQ_KERNELS=scalar|avx2).

struct Kernels {
    // sum a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    // sum a[i] * b[i] * c[i]
    double (*dot3)(const double* a, const double* b, const double* c, std::size_t n);
    // sum conj(a[i]) * b[i], split complex
    std::complex<double> (*cdotc)(const double* are, const double* aim, const double* bre,
                                  const double* bim, std::size_t n);
    // |sum a[i] * b[i]|^2, split complex (no conjugation)
    double (*abs2_cdot)(const double* are, const double* aim, const double* bre,
                        const double* bim, std::size_t n);
    // (fre, fim) += (cre + i*cim) * phi  for a real field phi
    void (*axpy_creal)(double* fre, double* fim, const double* phi, double cre, double cim,
                       std::size_t n);
    const char* name;
};

const Kernels& active();
const Kernels& scalar();

// Returns the variant picked at startup ("scalar" or "avx2").
std::string active_name();

}  // namespace bq::kern
