#ifndef SENTIKIT_COOC_H_
#define SENTIKIT_COOC_H_

#include <Eigen/SparseCore>
#include <string>

#include "sentikit/corpus.h"
#include "sentikit/windows.h"

namespace sentikit {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct CoocMatrix {
  Vocabulary vocab;
  SparseMatrix counts;
  double total = 0.0;  // sum of all pair weights
};

struct PpmiMatrix {
  Vocabulary vocab;
  SparseMatrix values;  // stored entries are all > 0
};

struct EdgeMatrix {
  Vocabulary vocab;
  SparseMatrix values;  // cosine of PPMI rows, symmetric
};

// Accumulates window pairs over all documents; pairs touching a word outside
// `vocab` are skipped. Documents are split across `threads` workers and the
// partial counts merged, so the result does not depend on the thread count.
CoocMatrix build_cooc(const Corpus& corpus, const WindowSpec& spec,
                      const Vocabulary& vocab,
                      const KeyScheme& scheme = KeyScheme::surface(),
                      int threads = 1);
CoocMatrix build_cooc(const Corpus& corpus, const WindowSpec& spec,
                      int min_freq,
                      const KeyScheme& scheme = KeyScheme::surface(),
                      int threads = 1);

// max(ln(x_ij * T / (r_i * c_j)), 0) with r the row sums and c the column
// sums of the pair matrix (equal for symmetric windows). Throws DataError
// when the matrix is empty.
PpmiMatrix ppmi(const CoocMatrix& cooc);

// Cosine between PPMI rows. Supported rows get E_ii = 1, all-zero rows stay
// empty.
EdgeMatrix cosine_edges(const PpmiMatrix& ppmi);

// Coordinate list "i\tj\tvalue" plus a vocabulary sidecar "index\tword".
void save_sparse(const SparseMatrix& m, const Vocabulary& vocab,
                 const std::string& path, const std::string& vocab_path);
SparseMatrix load_sparse(const std::string& path, size_t n);
void save_vocabulary(const Vocabulary& vocab, const std::string& path);
Vocabulary load_vocabulary(const std::string& path);

}  // namespace sentikit

#endif  // SENTIKIT_COOC_H_
