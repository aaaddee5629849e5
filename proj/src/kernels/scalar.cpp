#include "bq/kernels.hpp"

namespace bq::kern {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double dot3_scalar(const double* a, const double* b, const double* c, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i] * c[i];
    return s;
}

std::complex<double> cdotc_scalar(const double* are, const double* aim, const double* bre,
                                  const double* bim, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += are[i] * bre[i] + aim[i] * bim[i];
        im += are[i] * bim[i] - aim[i] * bre[i];
    }
    return {re, im};
}

double abs2_cdot_scalar(const double* are, const double* aim, const double* bre,
                        const double* bim, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += are[i] * bre[i] - aim[i] * bim[i];
        im += are[i] * bim[i] + aim[i] * bre[i];
    }
    return re * re + im * im;
}

void axpy_creal_scalar(double* fre, double* fim, const double* phi, double cre, double cim,
                       std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        fre[i] += cre * phi[i];
        fim[i] += cim * phi[i];
    }
}

}  // namespace

const Kernels& scalar() {
    static const Kernels k = {dot_scalar, dot3_scalar, cdotc_scalar, abs2_cdot_scalar,
                              axpy_creal_scalar, "scalar"};
    return k;
}

}  // namespace bq::kern
