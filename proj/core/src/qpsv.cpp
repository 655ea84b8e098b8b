#include "entanglab/qpsv.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace entanglab {

static_assert(std::endian::native == std::endian::little,
              "QPSV I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'Q', 'P', 'S', 'V'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw std::runtime_error("QPSV file truncated");
  return v;
}

}  // namespace

void save_qpsv(const std::string& path, const PureState& psi) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint8_t>(os, static_cast<std::uint8_t>(psi.local_dim()));
  put<std::uint16_t>(os, static_cast<std::uint16_t>(psi.window().site_count()));
  for (int d : psi.window().dims())
    put<std::uint16_t>(os, static_cast<std::uint16_t>(d));
  for (Eigen::Index i = 0; i < psi.dim(); ++i) {
    put<double>(os, psi.amplitudes()[i].real());
    put<double>(os, psi.amplitudes()[i].imag());
  }
  if (!os) throw std::runtime_error("write to " + path + " failed");
}

PureState load_qpsv(const std::string& path) {
  std::ifstream is(path, std::ios::binary | std::ios::ate);
  if (!is) throw std::runtime_error("cannot open " + path);
  const std::int64_t file_size = static_cast<std::int64_t>(is.tellg());
  is.seekg(0);

  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error(path + " is not a QPSV file");
  const auto version = get<std::uint32_t>(is);
  if (version != kVersion)
    throw std::runtime_error("unsupported QPSV version " +
                             std::to_string(version));
  const int nu = get<std::uint8_t>(is);
  const int n_sites = get<std::uint16_t>(is);
  if (nu < 2 || nu > 4 || n_sites < 1 || n_sites > 24)
    throw std::runtime_error("QPSV header out of range");

  std::int64_t payload = 16;
  for (int i = 0; i < n_sites; ++i) payload *= nu;
  const std::int64_t dims_bytes = file_size - 11 - payload;
  if (dims_bytes < 2 || dims_bytes % 2 != 0 || dims_bytes / 2 > 3)
    throw std::runtime_error("QPSV file size inconsistent with its header");
  const int d = static_cast<int>(dims_bytes / 2);

  std::vector<int> dims(d);
  int product = 1;
  for (int k = 0; k < d; ++k) {
    dims[k] = get<std::uint16_t>(is);
    product *= dims[k];
  }
  if (product != n_sites)
    throw std::runtime_error("QPSV dims do not match the site count");

  Eigen::VectorXcd amps(payload / 16);
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    amps[i] = {re, im};
  }
  return PureState(Window(dims), nu, std::move(amps));
}

}  // namespace entanglab
