#include "thinhom/sparse.hpp"

#include <algorithm>

namespace thinhom {

void CsrMatrix::multiply(const double* x, double* y) const {
    for (int r = 0; r < n; ++r) {
        double s = 0.0;
        for (int k = ptr[r]; k < ptr[r + 1]; ++k) s += val[k] * x[idx[k]];
        y[r] = s;
    }
}

std::vector<double> CsrMatrix::diagonal() const {
    std::vector<double> d(n, 0.0);
    for (int r = 0; r < n; ++r) {
        const int k = slot(r, r);
        if (k >= 0) d[r] = val[k];
    }
    return d;
}

int CsrMatrix::slot(int r, int c) const {
    const auto first = idx.begin() + ptr[r];
    const auto last = idx.begin() + ptr[r + 1];
    const auto it = std::lower_bound(first, last, c);
    if (it == last || *it != c) return -1;
    return static_cast<int>(it - idx.begin());
}

void CsrMatrix::pin(int k) {
    for (int s = ptr[k]; s < ptr[k + 1]; ++s) val[s] = (idx[s] == k) ? 1.0 : 0.0;
    for (int r = 0; r < n; ++r) {
        if (r == k) continue;
        const int s = slot(r, k);
        if (s >= 0) val[s] = 0.0;
    }
}

} // namespace thinhom
