#include "css/datagen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "css/rng.hpp"

namespace css {

namespace {

Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

// Unnormalized low-rank-plus-noise draw; reports the noise norm.
Matrix signal_plus_noise(const SyntheticSpec& spec, Rng& rng, double* noise_fro,
                         double* signal_fro) {
  Matrix signal;
  if (spec.k == 0) {
    signal = gaussian_matrix(spec.n1, spec.n2, rng);
  } else if (spec.n1 == spec.n2) {
    const Matrix b = gaussian_matrix(spec.n1, spec.k, rng);
    signal = b * b.transpose();
  } else {
    const Matrix b1 = gaussian_matrix(spec.n1, spec.k, rng);
    const Matrix b2 = gaussian_matrix(spec.n2, spec.k, rng);
    signal = b1 * b2.transpose();
  }
  if (signal_fro) *signal_fro = signal.norm();
  if (spec.sigma > 0.0 && spec.k > 0) {
    // Cellwise sd sigma * ||A||_F / sqrt(n1 n2) makes sigma the
    // noise-to-signal ratio the experiment figures plot as a floor.
    const double cell_sd =
        spec.sigma * signal.norm() / std::sqrt(static_cast<double>(spec.n1 * spec.n2));
    const Matrix noise = cell_sd * gaussian_matrix(spec.n1, spec.n2, rng);
    if (noise_fro) *noise_fro = noise.norm();
    return signal + noise;
  }
  if (noise_fro) *noise_fro = 0.0;
  return signal;
}

}  // namespace

GeneratedMatrix gen_lowrank_noise_parts(const SyntheticSpec& spec) {
  if (spec.n1 < 1 || spec.n2 < 1) throw ParameterError("gen_lowrank_noise: empty dimensions");
  if (spec.sigma < 0.0) throw ParameterError("gen_lowrank_noise: sigma must be >= 0");
  Rng rng(spec.seed);
  GeneratedMatrix out;
  double noise = 0.0, signal = 0.0;
  out.m = signal_plus_noise(spec, rng, &noise, &signal);
  const double nrm = out.m.norm();
  if (nrm == 0.0) throw DegenerateInputError("gen_lowrank_noise: zero matrix");
  out.m /= nrm;
  out.noise_fro = noise / nrm;
  out.signal_fro = signal / nrm;
  return out;
}

Matrix gen_lowrank_noise(const SyntheticSpec& spec) { return gen_lowrank_noise_parts(spec).m; }

Matrix gen_coherent(const SyntheticSpec& spec) {
  if (spec.n1 < 1 || spec.n2 < 1) throw ParameterError("gen_coherent: empty dimensions");
  if (spec.repeated < 1) throw ParameterError("gen_coherent: repeated must be >= 1");
  if (spec.repeated >= spec.n2) throw ParameterError("gen_coherent: repeated must be < n2");
  if (spec.sigma < 0.0) throw ParameterError("gen_coherent: sigma must be >= 0");

  Rng rng(spec.seed);
  Matrix m = signal_plus_noise(spec, rng, nullptr, nullptr);

  const Index source = static_cast<Index>(rng.below(static_cast<std::uint64_t>(spec.n2)));
  const Vector amplified = spec.scale * m.col(source);

  // Partial Fisher-Yates for `repeated` distinct overwrite positions.
  std::vector<Index> positions(static_cast<std::size_t>(spec.n2));
  std::iota(positions.begin(), positions.end(), Index{0});
  for (Index i = 0; i < spec.repeated; ++i) {
    const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(spec.n2 - i)));
    std::swap(positions[static_cast<std::size_t>(i)], positions[static_cast<std::size_t>(j)]);
  }
  for (Index i = 0; i < spec.repeated; ++i)
    m.col(positions[static_cast<std::size_t>(i)]) = amplified;

  const double nrm = m.norm();
  if (nrm == 0.0) throw DegenerateInputError("gen_coherent: zero matrix");
  return m / nrm;
}

Matrix load_sign_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open sign matrix file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      if (tok != "1" && tok != "-1" && tok != "0" && tok != "+1")
        throw ParseError("sign matrix entry must be -1, 0 or 1, got '" + tok + "'", lineno);
      row.push_back(std::stod(tok));
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("ragged sign matrix row", lineno);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty sign matrix file: " + path);
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

Matrix encode_sign(const std::vector<std::vector<std::string>>& genotypes) {
  if (genotypes.empty() || genotypes.front().empty()) throw ParameterError("encode_sign: empty grid");
  const auto n1 = genotypes.size();
  const auto n2 = genotypes.front().size();
  for (const auto& row : genotypes)
    if (row.size() != n2) throw ParameterError("encode_sign: ragged grid");

  Matrix m(static_cast<Index>(n1), static_cast<Index>(n2));
  for (std::size_t j = 0; j < n2; ++j) {
    // B1 is the first base seen scanning the column top-down, B2 the second
    // distinct one.
    char b1 = 0, b2 = 0;
    for (std::size_t i = 0; i < n1 && b2 == 0; ++i) {
      const std::string& g = genotypes[i][j];
      if (g.size() != 2) throw ParseError("genotype must be two letters, got '" + g + "'");
      for (char c : g) {
        if (b1 == 0)
          b1 = c;
        else if (c != b1 && b2 == 0)
          b2 = c;
      }
    }
    for (std::size_t i = 0; i < n1; ++i) {
      const std::string& g = genotypes[i][j];
      if (g.size() != 2) throw ParseError("genotype must be two letters, got '" + g + "'");
      if (g[0] == b1 && g[1] == b1)
        m(static_cast<Index>(i), static_cast<Index>(j)) = -1.0;
      else if (b2 != 0 && g[0] == b2 && g[1] == b2)
        m(static_cast<Index>(i), static_cast<Index>(j)) = 1.0;
      else
        m(static_cast<Index>(i), static_cast<Index>(j)) = 0.0;
    }
  }
  return m;
}

std::vector<std::pair<Index, Index>> split_windows(const Matrix& m, Index k, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("split_windows: eps must be in (0, 1)");
  if (k < 1) throw ParameterError("split_windows: k must be >= 1");

  auto window_ok = [&](Index begin, Index end) {
    const Index width = end - begin;
    if (width <= k) return true;  // ratio check skipped at or below rank width
    const Matrix w = m.middleCols(begin, width);
    const double total = w.squaredNorm();
    if (total == 0.0) return true;
    const double resid = best_rank_k_error(w, k);
    return resid * resid / total <= eps;
  };

  std::vector<std::pair<Index, Index>> windows;
  Index begin = 0;
  Index end = 1;
  while (end <= m.cols()) {
    if (end == m.cols()) {
      windows.emplace_back(begin, end);
      break;
    }
    if (window_ok(begin, end + 1)) {
      ++end;
    } else {
      windows.emplace_back(begin, end);
      begin = end;
      end = begin + 1;
    }
  }
  return windows;
}

Matrix load_grayscale(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open image file: " + path);

  auto next_token = [&in]() -> std::string {
    std::string tok;
    while (true) {
      int c = in.peek();
      if (c == EOF) throw FormatError("unexpected end of PGM header");
      if (c == '#') {
        std::string comment;
        std::getline(in, comment);
        continue;
      }
      if (std::isspace(c)) {
        in.get();
        continue;
      }
      in >> tok;
      return tok;
    }
  };

  const std::string magic = next_token();
  if (magic != "P2" && magic != "P5") throw FormatError("unsupported magic number: " + magic);
  const Index cols = static_cast<Index>(std::stol(next_token()));
  const Index rows = static_cast<Index>(std::stol(next_token()));
  const long maxval = std::stol(next_token());
  if (rows < 1 || cols < 1 || maxval < 1 || maxval > 255)
    throw FormatError("bad PGM dimensions or maxval");

  Matrix m(rows, cols);
  if (magic == "P2") {
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) {
        long v;
        if (!(in >> v)) throw FormatError("truncated P2 pixel data");
        m(i, j) = static_cast<double>(v) / static_cast<double>(maxval);
      }
  } else {
    in.get();  // single whitespace after maxval
    std::vector<unsigned char> buf(static_cast<std::size_t>(rows * cols));
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size()))
      throw FormatError("truncated P5 pixel data");
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j)
        m(i, j) = static_cast<double>(buf[static_cast<std::size_t>(i * cols + j)]) /
                  static_cast<double>(maxval);
  }
  return m;
}

Matrix load_dense_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file: " + path);
  Index rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 1 || cols < 1)
    throw ParseError("bad dense matrix header in " + path, 1);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      if (!(in >> m(i, j))) throw ParseError("truncated dense matrix data", static_cast<long>(i + 2));
  if (!m.allFinite()) throw ParseError("non-finite entry in " + path);
  return m;
}

void save_dense_text(const Matrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write matrix file: " + path);
  out.precision(17);
  out << m.rows() << " " << m.cols() << "\n";
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << " ";
      out << m(i, j);
    }
    out << "\n";
  }
}

}  // namespace css
