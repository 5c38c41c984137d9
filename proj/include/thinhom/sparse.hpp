#pragma once

#include <cstddef>
#include <vector>

namespace thinhom {

// Symmetric sparse matrix in CSR (full storage). Row pattern is built once
// per mesh and reused across Newton assemblies.
struct CsrMatrix {
    int n = 0;
    std::vector<int> ptr;   // size n+1
    std::vector<int> idx;   // column indices, sorted per row
    std::vector<double> val;

    std::size_t nnz() const { return idx.size(); }
    void zero_values() { val.assign(idx.size(), 0.0); }

    // y = A x
    void multiply(const double* x, double* y) const;
    std::vector<double> diagonal() const;

    // slot of (r, c) in val; -1 if not in the pattern
    int slot(int r, int c) const;

    // Dirichlet-style pin: zero row and column k, put 1 on the diagonal.
    void pin(int k);
};

} // namespace thinhom
