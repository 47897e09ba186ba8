#include "pgl/signals.hpp"

#include <regex>
#include <string>

#include "csv.hpp"

namespace pgl {

MatrixXd SignalBatch::unfold(Index s) const {
  MatrixXd y(n, m);
  for (Index l = 0; l < m; ++l) y.col(l) = samples.row(s).segment(l * n, n).transpose();
  return y;
}

void SignalBatch::validate() const {
  if (n < 1 || m < 1) throw Error(ErrorKind::InvalidSize, "signal batch needs N, M >= 1");
  if (samples.cols() != n * m) throw Error(ErrorKind::Shape, "signal rows must have length N*M");
  if (samples.rows() < 1) throw Error(ErrorKind::InvalidSize, "signal batch has zero samples");
  if (!samples.allFinite()) throw Error(ErrorKind::Numeric, "signal batch has non-finite entries");
}

WhiteSampler gaussian_sampler() {
  return [dist = std::normal_distribution<double>(0.0, 1.0)](Rng& rng) mutable { return dist(rng); };
}

SignalBatch synthesize(const FilterSpec& spec, const Graph& coupling, const Graph& physical,
                       Index s, double sigma2, Rng& rng, const WhiteSampler& excitation) {
  if (s < 1) throw Error(ErrorKind::InvalidSize, "synthesize needs at least one sample");
  if (!(sigma2 >= 0.0)) throw Error(ErrorKind::InvalidArgument, "noise variance must be >= 0");
  const Index nm = coupling.size() * physical.size();
  const MatrixXd h = filter_matrix(spec, coupling, physical);
  const double sigma = std::sqrt(sigma2);
  std::normal_distribution<double> noise(0.0, 1.0);
  WhiteSampler draw = excitation;  // private copy: samplers may carry state

  MatrixXd x(s, nm);
  MatrixXd w(s, nm);
  for (Index r = 0; r < s; ++r) {
    for (Index k = 0; k < nm; ++k) x(r, k) = draw(rng);
    for (Index k = 0; k < nm; ++k) w(r, k) = sigma2 > 0.0 ? sigma * noise(rng) : 0.0;
  }
  SignalBatch out;
  out.n = physical.size();
  out.m = coupling.size();
  out.samples = x * h.transpose() + w;
  return out;
}

UnfoldedCovariance unfold_covariance(const MatrixXd& full, Index n, Index m) {
  if (full.rows() != n * m || full.cols() != n * m)
    throw Error(ErrorKind::Shape, "covariance is not NM×NM");
  UnfoldedCovariance out{MatrixXd::Zero(m, m), MatrixXd::Zero(n, n)};
  for (Index a = 0; a < m; ++a) {
    out.node += full.block(a * n, a * n, n, n);
    for (Index b = 0; b < m; ++b) out.layer(a, b) = full.block(a * n, b * n, n, n).trace();
  }
  out.node = (out.node + out.node.transpose()) / 2.0;
  out.layer = (out.layer + out.layer.transpose()) / 2.0;
  return out;
}

CovarianceEstimate sample_covariances(const SignalBatch& batch) {
  batch.validate();
  CovarianceEstimate out;
  out.sample_count = batch.sample_count();
  out.full = (batch.samples.transpose() * batch.samples) / static_cast<double>(out.sample_count);
  out.full = (out.full + out.full.transpose()) / 2.0;
  auto unfolded = unfold_covariance(out.full, batch.n, batch.m);
  out.layer = std::move(unfolded.layer);
  out.node = std::move(unfolded.node);
  return out;
}

UnfoldedCovariance population_unfolded(const FilterSpec& spec, const Graph& coupling,
                                       const Graph& physical) {
  const EigDecomp ec = sym_evd(coupling.adj());
  const EigDecomp eg = sym_evd(physical.adj());
  const MatrixXd power = freq_response(spec, ec.values, eg.values).values.array().square();
  const VectorXd layer_w = power.rowwise().sum();     // sum over λ^G
  const VectorXd node_w = power.colwise().sum().transpose();  // sum over λ^C
  UnfoldedCovariance out;
  out.layer = ec.vectors * layer_w.asDiagonal() * ec.vectors.transpose();
  out.node = eg.vectors * node_w.asDiagonal() * eg.vectors.transpose();
  out.layer = (out.layer + out.layer.transpose()) / 2.0;
  out.node = (out.node + out.node.transpose()) / 2.0;
  return out;
}

void write_batch(const SignalBatch& batch, const std::filesystem::path& path) {
  batch.validate();
  auto out = csv::open_out(path);
  out << "# N=" << batch.n << " M=" << batch.m << " S=" << batch.sample_count() << '\n';
  for (Index r = 0; r < batch.samples.rows(); ++r) {
    for (Index c = 0; c < batch.samples.cols(); ++c) {
      if (c) out << ',';
      out << csv::format_double(batch.samples(r, c));
    }
    out << '\n';
  }
}

SignalBatch read_batch(const std::filesystem::path& path) {
  auto in = csv::open_in(path);
  std::string text;
  if (!std::getline(in, text)) throw Error(ErrorKind::Parse, csv::where(path, 1) + "missing header");
  static const std::regex header(R"(^\s*#\s*N=(\d+)\s+M=(\d+)\s+S=(\d+)\s*$)");
  std::smatch match;
  if (!std::regex_match(text, match, header))
    throw Error(ErrorKind::Parse, csv::where(path, 1) + "malformed header, expected '# N=<n> M=<m> S=<s>'");
  SignalBatch batch;
  batch.n = std::stol(match[1].str());
  batch.m = std::stol(match[2].str());
  const Index declared = std::stol(match[3].str());
  if (batch.n < 1 || batch.m < 1) throw Error(ErrorKind::Parse, csv::where(path, 1) + "N and M must be positive");
  const auto width = static_cast<std::size_t>(batch.n * batch.m);

  std::vector<std::vector<double>> rows;
  for (std::size_t line = 2; std::getline(in, text); ++line) {
    const auto t = csv::trim(text);
    if (t.empty()) continue;
    auto row = csv::parse_row(t, path, line);
    if (row.size() != width)
      throw Error(ErrorKind::Parse, csv::where(path, line) + "expected " + std::to_string(width) +
                                        " values, found " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::Parse, path.string() + ": zero samples");
  if (static_cast<Index>(rows.size()) != declared)
    throw Error(ErrorKind::Parse, path.string() + ": header declares S=" + std::to_string(declared) +
                                      " but found " + std::to_string(rows.size()) + " rows");
  batch.samples.resize(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (Index r = 0; r < batch.samples.rows(); ++r)
    for (Index c = 0; c < batch.samples.cols(); ++c)
      batch.samples(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  return batch;
}

}  // namespace pgl
