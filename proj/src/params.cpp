#include "errid/params.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "errid/rand.hpp"

namespace errid {

std::vector<size_t> sample_without_replacement(size_t n, size_t k, std::mt19937_64& rng) {
  if (k > n) throw std::invalid_argument("sample: k exceeds population size");
  std::vector<size_t> pool(n);
  for (size_t i = 0; i < n; ++i) pool[i] = i;
  std::vector<size_t> out;
  out.reserve(k);
  for (size_t i = 0; i < k; ++i) {
    size_t j = i + static_cast<size_t>(uniform_below(rng, n - i));
    std::swap(pool[i], pool[j]);
    out.push_back(pool[i]);
  }
  return out;
}

int ParameterStore::add(const std::string& name, Tensor init) {
  if (index_.count(name)) throw std::invalid_argument("parameter already exists: " + name);
  int idx = static_cast<int>(params_.size());
  Parameter p;
  p.name = name;
  p.grad = Tensor::zeros(init.shape);
  p.value = std::move(init);
  params_.push_back(std::move(p));
  index_[name] = idx;
  return idx;
}

bool ParameterStore::contains(const std::string& name) const { return index_.count(name) > 0; }

int ParameterStore::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::invalid_argument("no such parameter: " + name);
  return it->second;
}

void ParameterStore::zero_grads() {
  for (auto& p : params_) std::fill(p.grad.data.begin(), p.grad.data.end(), 0.0);
}

double ParameterStore::grad_norm() const {
  double sq = 0.0;
  for (const auto& p : params_)
    for (double g : p.grad.data) sq += g * g;
  return std::sqrt(sq);
}

std::int64_t ParameterStore::value_count() const {
  std::int64_t n = 0;
  for (const auto& p : params_) n += p.value.size();
  return n;
}

namespace {

constexpr char kMagic[8] = {'E', 'R', 'I', 'D', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_u64(std::ostream& os, std::uint64_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
std::uint32_t read_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
std::uint64_t read_u64(std::istream& is) {
  std::uint64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
void write_str(std::ostream& os, const std::string& s) {
  write_u64(os, s.size());
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}
std::string read_str(std::istream& is) {
  std::uint64_t n = read_u64(is);
  std::string s(n, '\0');
  is.read(s.data(), static_cast<std::streamsize>(n));
  return s;
}

}  // namespace

void save_checkpoint(const std::string& path, const ParameterStore& store,
                     const std::string& config_text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write checkpoint: " + tmp);
    os.write(kMagic, sizeof(kMagic));
    write_u32(os, kVersion);
    write_str(os, config_text);
    write_u64(os, store.size());
    for (size_t i = 0; i < store.size(); ++i) {
      const Parameter& p = store.at(static_cast<int>(i));
      write_str(os, p.name);
      write_u32(os, static_cast<std::uint32_t>(p.value.rank()));
      for (int d : p.value.shape) write_u32(os, static_cast<std::uint32_t>(d));
      os.write(reinterpret_cast<const char*>(p.value.data.data()),
               static_cast<std::streamsize>(p.value.data.size() * sizeof(double)));
    }
    if (!os) throw std::runtime_error("checkpoint write failed: " + tmp);
  }
  // atomic publish
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename checkpoint into place: " + path);
}

std::string load_checkpoint(const std::string& path, ParameterStore& store) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::string(magic, 8) != std::string(kMagic, 8))
    throw std::runtime_error("not a checkpoint file: " + path);
  std::uint32_t version = read_u32(is);
  if (version != kVersion)
    throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
  std::string config_text = read_str(is);
  std::uint64_t count = read_u64(is);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::string name = read_str(is);
    std::uint32_t rank = read_u32(is);
    std::vector<int> shape(rank);
    for (auto& d : shape) d = static_cast<int>(read_u32(is));
    Tensor t = Tensor::zeros(shape);
    is.read(reinterpret_cast<char*>(t.data.data()),
            static_cast<std::streamsize>(t.data.size() * sizeof(double)));
    if (!is) throw std::runtime_error("truncated checkpoint: " + path);
    if (store.contains(name)) {
      Parameter& p = store.at(name);
      check_same_shape(p.value, t, "load_checkpoint");
      p.value = std::move(t);
    } else {
      store.add(name, std::move(t));
    }
  }
  return config_text;
}

std::string read_checkpoint_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::string(magic, 8) != std::string(kMagic, 8))
    throw std::runtime_error("not a checkpoint file: " + path);
  std::uint32_t version = read_u32(is);
  if (version != kVersion)
    throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
  return read_str(is);
}

}  // namespace errid
