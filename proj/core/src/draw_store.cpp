#include <cstdint>
#include <cstring>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rtbvar/csv.hpp"
#include "rtbvar/sampler.hpp"

namespace rtbvar {

namespace {

void hash_bytes(std::uint64_t& h, const void* data, size_t n) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
}

void hash_matrix(std::uint64_t& h, const Eigen::MatrixXd& m) {
  std::int64_t dims[2] = {m.rows(), m.cols()};
  hash_bytes(h, dims, sizeof(dims));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      double v = m(i, j);
      hash_bytes(h, &v, sizeof(v));
    }
}

// S x (rows*cols) layout: one retained draw per line, row-major within a draw.
Eigen::MatrixXd flatten(const std::vector<Eigen::MatrixXd>& mats) {
  if (mats.empty()) return Eigen::MatrixXd(0, 0);
  const Eigen::Index r = mats[0].rows(), c = mats[0].cols();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(mats.size()), r * c);
  for (size_t s = 0; s < mats.size(); ++s)
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) out(static_cast<Eigen::Index>(s), i * c + j) = mats[s](i, j);
  return out;
}

std::vector<Eigen::MatrixXd> unflatten(const Eigen::MatrixXd& flat, Eigen::Index r,
                                       Eigen::Index c) {
  if (flat.rows() > 0 && flat.cols() != r * c)
    throw std::runtime_error("draw store: flattened column count mismatch");
  std::vector<Eigen::MatrixXd> out;
  out.reserve(static_cast<size_t>(flat.rows()));
  for (Eigen::Index s = 0; s < flat.rows(); ++s) {
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) m(i, j) = flat(s, i * c + j);
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

std::uint64_t DrawStore::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::int64_t header[4] = {m, p, tvp ? 1 : 0, n_draws()};
  hash_bytes(h, header, sizeof(header));
  for (const auto& c : codes) hash_bytes(h, c.data(), c.size());
  hash_matrix(h, std_info.mean);
  hash_matrix(h, std_info.sd);
  for (const auto& mat : coeff) hash_matrix(h, mat);
  for (const auto& mat : h_inv) hash_matrix(h, mat);
  for (const auto& v : sigma) hash_matrix(h, v);
  for (const auto& mat : y_tail) hash_matrix(h, mat);
  hash_matrix(h, sv_mu);
  hash_matrix(h, sv_phi);
  hash_matrix(h, sv_sigma);
  return h;
}

void save_draw_store(const DrawStore& store, const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_matrix_csv(dir + "/coeff.csv", flatten(store.coeff));
  write_matrix_csv(dir + "/h_inv.csv", flatten(store.h_inv));
  write_matrix_csv(dir + "/y_tail.csv", flatten(store.y_tail));
  Eigen::MatrixXd sig(store.n_draws(), store.m);
  for (int s = 0; s < store.n_draws(); ++s) sig.row(s) = store.sigma[static_cast<size_t>(s)];
  write_matrix_csv(dir + "/sigma.csv", sig);
  write_matrix_csv(dir + "/sv_mu.csv", store.sv_mu);
  write_matrix_csv(dir + "/sv_phi.csv", store.sv_phi);
  write_matrix_csv(dir + "/sv_sigma.csv", store.sv_sigma);

  nlohmann::json j;
  j["m"] = store.m;
  j["p"] = store.p;
  j["tvp"] = store.tvp;
  j["draws"] = store.n_draws();
  j["seed"] = store.seed;
  j["origin"] = store.origin.str();
  j["codes"] = store.codes;
  std::vector<double> mean(store.std_info.mean.data(),
                           store.std_info.mean.data() + store.std_info.mean.size());
  std::vector<double> sd(store.std_info.sd.data(),
                         store.std_info.sd.data() + store.std_info.sd.size());
  j["std_mean"] = mean;
  j["std_sd"] = sd;
  write_text_file(dir + "/manifest.json", j.dump(2) + "\n");
}

DrawStore load_draw_store(const std::string& dir) {
  nlohmann::json j = nlohmann::json::parse(read_text_file(dir + "/manifest.json"));
  DrawStore store;
  store.m = j.at("m").get<int>();
  store.p = j.at("p").get<int>();
  store.tvp = j.at("tvp").get<bool>();
  store.seed = j.at("seed").get<std::uint64_t>();
  store.origin = Month::parse(j.at("origin").get<std::string>());
  store.codes = j.at("codes").get<std::vector<std::string>>();
  std::vector<double> mean = j.at("std_mean").get<std::vector<double>>();
  std::vector<double> sd = j.at("std_sd").get<std::vector<double>>();
  store.std_info.mean = Eigen::Map<Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
  store.std_info.sd = Eigen::Map<Eigen::VectorXd>(sd.data(), static_cast<Eigen::Index>(sd.size()));

  const Eigen::Index m = store.m, pm = static_cast<Eigen::Index>(store.p) * m;
  store.coeff = unflatten(read_matrix_csv(dir + "/coeff.csv"), m, pm + 1);
  store.h_inv = unflatten(read_matrix_csv(dir + "/h_inv.csv"), m, m);
  store.y_tail = unflatten(read_matrix_csv(dir + "/y_tail.csv"), store.p, m);
  Eigen::MatrixXd sig = read_matrix_csv(dir + "/sigma.csv");
  for (Eigen::Index s = 0; s < sig.rows(); ++s) store.sigma.push_back(sig.row(s).transpose());
  store.sv_mu = read_matrix_csv(dir + "/sv_mu.csv");
  store.sv_phi = read_matrix_csv(dir + "/sv_phi.csv");
  store.sv_sigma = read_matrix_csv(dir + "/sv_sigma.csv");

  const int n = j.at("draws").get<int>();
  if (store.n_draws() != n || static_cast<int>(store.h_inv.size()) != n ||
      static_cast<int>(store.sigma.size()) != n || static_cast<int>(store.y_tail.size()) != n)
    throw std::runtime_error("draw store: inconsistent draw counts in " + dir);
  return store;
}

}  // namespace rtbvar
