#include "lesbox/snapshot.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace lesbox {

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian");

namespace {

std::filesystem::path with_ext(const std::filesystem::path& base,
                               const char* ext) {
  std::filesystem::path p = base;
  p += ext;
  return p;
}

} // namespace

void write_snapshot(const std::filesystem::path& base, const SpectralField& f,
                    double time) {
  const TorusGrid& g = f.grid;
  const int n = g.n;
  const std::filesystem::path bin = with_ext(base, ".bin");
  std::ofstream out(bin, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("snapshot: cannot open " + bin.string());
  std::vector<double> row(2 * static_cast<std::size_t>(n));
  for (int c = 0; c < f.components; ++c)
    for (int m0 = -n / 2 + 1; m0 <= n / 2; ++m0)
      for (int m1 = -n / 2 + 1; m1 <= n / 2; ++m1) {
        std::size_t j = 0;
        for (int m2 = -n / 2 + 1; m2 <= n / 2; ++m2) {
          const cplx v = f.at(c, g.site_of_modes(m0, m1, m2));
          row[j++] = v.real();
          row[j++] = v.imag();
        }
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(j * sizeof(double)));
      }
  if (!out) throw std::runtime_error("snapshot: write failed " + bin.string());
  out.close();

  nlohmann::ordered_json meta;
  meta["schema"] = "lesbox-field-v1";
  meta["n"] = g.n;
  meta["period"] = g.period;
  meta["dealias_fraction"] = g.dealias_fraction;
  meta["components"] = f.components;
  meta["zero_mean"] = f.zero_mean;
  meta["divergence_free"] = f.divergence_free;
  meta["time"] = time;
  meta["layout"] =
      "component-major; modes ascending in (m0,m1,m2), m in [-n/2+1, n/2]; "
      "little-endian float64 (re,im) pairs";
  std::ofstream js(with_ext(base, ".json"), std::ios::trunc);
  if (!js)
    throw std::runtime_error("snapshot: cannot open sidecar for " +
                             base.string());
  js << meta.dump(2) << "\n";
}

Snapshot read_snapshot(const std::filesystem::path& base) {
  std::ifstream js(with_ext(base, ".json"));
  if (!js)
    throw std::runtime_error("snapshot: missing sidecar for " + base.string());
  nlohmann::json meta = nlohmann::json::parse(js);
  if (meta.value("schema", "") != "lesbox-field-v1")
    throw std::runtime_error("snapshot: unknown schema in sidecar");
  const int n = meta.at("n").get<int>();
  const double period = meta.at("period").get<double>();
  const double fraction = meta.at("dealias_fraction").get<double>();
  const int components = meta.at("components").get<int>();

  const TorusGrid g = make_grid(n, period, fraction);
  SpectralField f = SpectralField::zeros(g, components);
  f.zero_mean = meta.value("zero_mean", false);
  f.divergence_free = meta.value("divergence_free", false);

  const std::filesystem::path bin = with_ext(base, ".bin");
  std::ifstream in(bin, std::ios::binary);
  if (!in) throw std::runtime_error("snapshot: cannot open " + bin.string());
  const std::size_t expect =
      static_cast<std::size_t>(components) * g.site_count() * 2;
  if (std::filesystem::file_size(bin) != expect * sizeof(double))
    throw std::runtime_error("snapshot: payload size does not match sidecar " +
                             bin.string());
  std::vector<double> data(expect);
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(expect * sizeof(double)));
  if (static_cast<std::size_t>(in.gcount()) != expect * sizeof(double))
    throw std::runtime_error("snapshot: truncated payload " + bin.string());

  std::size_t j = 0;
  for (int c = 0; c < components; ++c)
    for (int m0 = -n / 2 + 1; m0 <= n / 2; ++m0)
      for (int m1 = -n / 2 + 1; m1 <= n / 2; ++m1)
        for (int m2 = -n / 2 + 1; m2 <= n / 2; ++m2) {
          f.at(c, g.site_of_modes(m0, m1, m2)) = cplx{data[j], data[j + 1]};
          j += 2;
        }
  Snapshot s;
  s.field = std::move(f);
  s.time = meta.value("time", 0.0);
  return s;
}

} // namespace lesbox
