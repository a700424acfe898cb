#include "halfline/field_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "halfline/errors.hpp"

namespace halfline::io {

namespace {

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
}

template <class T>
void put(std::ostream& out, T v) {
  v = to_little(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error("field file is truncated");
  return to_little(v);
}

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Rows {
  std::vector<double> a, re, im;
};

Rows read_rows(const std::filesystem::path& path, const char* first) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  Rows r;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && line.rfind(first, 0) == 0) continue;  // header
    std::istringstream ss(line);
    double v[3];
    char comma = 0;
    if (!(ss >> v[0] >> comma >> v[1] >> comma >> v[2])) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected three numbers");
    }
    r.a.push_back(v[0]);
    r.re.push_back(v[1]);
    r.im.push_back(v[2]);
  }
  if (r.a.size() < 2) throw ConfigError(path.string() + ": need at least two rows");
  const double step = r.a[1] - r.a[0];
  if (!(step > 0.0)) throw ConfigError(path.string() + ": first column must increase");
  for (std::size_t i = 1; i < r.a.size(); ++i) {
    if (std::abs(r.a[i] - r.a[0] - static_cast<double>(i) * step) > 1e-9 * std::max(1.0, std::abs(r.a[i]))) {
      throw ConfigError(path.string() + ": first column must be uniformly spaced");
    }
  }
  return r;
}

}  // namespace

void write_field_binary(const Field2D& field, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(kFieldMagic, sizeof kFieldMagic);
  put<std::uint64_t>(out, kFieldVersion);
  put<std::uint64_t>(out, field.x.count);
  put<std::uint64_t>(out, field.t.count);
  for (double v : {field.x.start, field.x.step, field.t.start, field.t.step}) put(out, v);
  for (const cplx& v : field.values) {
    put(out, v.real());
    put(out, v.imag());
  }
  if (!out) throw Error("short write to " + path.string());
}

Field2D read_field_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  char magic[sizeof kFieldMagic];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kFieldMagic, sizeof magic) != 0) throw Error(path.string() + " is not a field file");
  const auto version = get<std::uint64_t>(in);
  if (version != kFieldVersion) throw Error(path.string() + ": unsupported field format " + std::to_string(version));
  const auto nx = get<std::uint64_t>(in);
  const auto nt = get<std::uint64_t>(in);
  const double x0 = get<double>(in), dx = get<double>(in), t0 = get<double>(in), dt = get<double>(in);
  Field2D f({x0, dx, static_cast<std::size_t>(nx)}, {t0, dt, static_cast<std::size_t>(nt)});
  for (cplx& v : f.values) {
    const double re = get<double>(in);
    v = {re, get<double>(in)};
  }
  return f;
}

std::string field_csv(const Field2D& field) {
  std::string out = "t,x,re,im\n";
  for (std::size_t n = 0; n < field.t.count; ++n) {
    for (std::size_t i = 0; i < field.x.count; ++i) {
      const cplx v = field(n, i);
      out += g17(field.t[n]) + ',' + g17(field.x[i]) + ',' + g17(v.real()) + ',' + g17(v.imag()) + '\n';
    }
  }
  return out;
}

std::string signal_csv(const TimeSignal& signal) {
  std::string out = "t,re,im\n";
  for (std::size_t i = 0; i < signal.size(); ++i) {
    out += g17(signal.time(i)) + ',' + g17(signal.samples[i].real()) + ',' + g17(signal.samples[i].imag()) + '\n';
  }
  return out;
}

std::string profile_csv(const SpaceProfile& profile) {
  std::string out = "x,re,im\n";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    out += g17(profile.position(i)) + ',' + g17(profile.samples[i].real()) + ',' + g17(profile.samples[i].imag()) +
           '\n';
  }
  return out;
}

TimeSignal read_signal_csv(const std::filesystem::path& path) {
  const Rows r = read_rows(path, "t");
  if (std::abs(r.a[0]) > 1e-12) throw ConfigError(path.string() + ": boundary signals start at t = 0");
  TimeSignal s;
  s.t0 = 0.0;
  s.dt = r.a[1] - r.a[0];
  std::size_t last = 0;
  for (std::size_t i = 0; i < r.a.size(); ++i) {
    s.samples.emplace_back(r.re[i], r.im[i]);
    if (s.samples.back() != cplx{}) last = i + 1;
  }
  // one trailing zero keeps the support invariant when the data end nonzero
  if (last == s.samples.size()) s.samples.emplace_back();
  s.support_end = s.time(last);
  s.validate();
  return s;
}

SpaceProfile read_profile_csv(const std::filesystem::path& path, Domain domain) {
  const Rows r = read_rows(path, "x");
  SpaceProfile p;
  p.x0 = r.a[0];
  p.dx = r.a[1] - r.a[0];
  p.domain = domain;
  for (std::size_t i = 0; i < r.a.size(); ++i) p.samples.emplace_back(r.re[i], r.im[i]);
  p.validate();
  return p;
}

std::uint64_t field_checksum(const Field2D& field) {
  double peak = 0.0;
  for (const cplx& v : field.values) peak = std::max({peak, std::abs(v.real()), std::abs(v.imag())});
  const double floor = 1e-13 * peak;
  auto clean = [floor](double v) { return std::abs(v) < floor ? 0.0 : v + 0.0; };  // also folds -0 into +0
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[64];
  for (const cplx& v : field.values) {
    const int n = std::snprintf(buf, sizeof buf, "%.10e %.10e\n", clean(v.real()), clean(v.imag()));
    for (int j = 0; j < n; ++j) {
      h ^= static_cast<unsigned char>(buf[j]);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::string to_hex(std::uint64_t value) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("short write to " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace halfline::io
