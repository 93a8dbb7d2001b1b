#include "fio/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace fio {

static_assert(std::endian::native == std::endian::little, "FIOG/FIOS writers assume a little-endian host");

namespace {

constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  template <class T>
  void put(T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out_.append(buf, sizeof(T));
  }
  void raw(const std::string& s) { out_ += s; }
  void values(const std::vector<cplx>& v) {
    for (const cplx& z : v) {
      put(z.real());
      put(z.imag());
    }
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}
  template <class T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string raw(std::size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::vector<cplx> values(std::size_t count) {
    if (count > (bytes_.size() - pos_) / 16) throw FormatError("truncated payload");
    std::vector<cplx> v(count);
    for (auto& z : v) {
      const double re = get<double>();
      const double im = get<double>();
      z = {re, im};
    }
    return v;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw FormatError("truncated file");
  }
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

Grid read_header(Reader& in, const char* magic) {
  if (in.raw(4) != magic) throw FormatError(std::string("bad magic, expected ") + magic);
  const auto version = in.get<std::uint32_t>();
  if (version != kVersion) throw FormatError("unsupported version " + std::to_string(version));
  const auto n = in.get<std::uint32_t>();
  const auto N = in.get<std::uint32_t>();
  try {
    return Grid(static_cast<int>(n), static_cast<int>(N));
  } catch (const Error& e) {
    throw FormatError(std::string("bad grid in header: ") + e.what());
  }
}

void write_header(Writer& out, const char* magic, const Grid& g) {
  out.raw(magic);
  out.put(kVersion);
  out.put(static_cast<std::uint32_t>(g.dim()));
  out.put(static_cast<std::uint32_t>(g.points()));
}

GridArray read_fiog_block(Reader& in) {
  GridArray a;
  a.grid = read_header(in, "FIOG");
  const auto dom = in.get<std::uint8_t>();
  if (dom > 1) throw FormatError("bad domain flag");
  a.domain = static_cast<Domain>(dom);
  a.values = in.values(a.grid.size());
  return a;
}

void write_fiog_block(Writer& out, const GridArray& a) {
  if (a.values.size() != a.grid.size()) throw ShapeError("value count does not match the grid");
  write_header(out, "FIOG", a.grid);
  out.put(static_cast<std::uint8_t>(a.domain));
  out.values(a.values);
}

nlohmann::json sidecar(const Grid& g, const std::string& format, const nlohmann::json& provenance) {
  nlohmann::json j;
  j["format"] = format;
  j["n"] = g.dim();
  j["N"] = g.points();
  j["L"] = kTwoPi;
  if (!provenance.is_null()) j["provenance"] = provenance;
  return j;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw Error("write failed for " + path.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

std::filesystem::path sidecar_path(const std::filesystem::path& data) {
  std::filesystem::path p = data;
  return p.replace_extension(".json");
}

std::string encode_fiog(const GridArray& a) {
  Writer out;
  write_fiog_block(out, a);
  return out.take();
}

GridArray decode_fiog(const std::string& bytes) {
  Reader in(bytes);
  GridArray a = read_fiog_block(in);
  if (!in.done()) throw FormatError("trailing bytes after FIOG payload");
  return a;
}

std::string encode_fios(const RoughSymbol& a) {
  const Grid& g = a.grid();
  Writer out;
  write_header(out, "FIOS", g);
  out.put(std::uint8_t{0});
  out.put(static_cast<std::uint8_t>(a.is_dense() ? 0 : 1));
  out.put(static_cast<std::uint32_t>(a.is_dense() ? 0 : a.rank()));
  if (a.is_dense()) {
    out.values(a.table());
  } else {
    for (const auto& t : a.terms()) {
      write_fiog_block(out, {g, Domain::space, t.b.values});
      write_fiog_block(out, {g, Domain::frequency, t.e.lattice_table(g).weights});
    }
  }
  return out.take();
}

RoughSymbol decode_fios(const std::string& bytes) {
  Reader in(bytes);
  const Grid g = read_header(in, "FIOS");
  if (in.get<std::uint8_t>() != 0) throw FormatError("bad domain flag for a symbol");
  const auto rep = in.get<std::uint8_t>();
  const auto K = in.get<std::uint32_t>();
  RoughSymbol a;
  if (rep == 0) {
    if (g.points() > RoughSymbol::dense_limit(g.dim())) throw FormatError("dense symbol exceeds the size limit");
    a = RoughSymbol::dense(g, in.values(g.size() * g.size()));
  } else if (rep == 1) {
    std::vector<SeparableTerm> terms;
    for (std::uint32_t m = 0; m < K; ++m) {
      GridArray b = read_fiog_block(in);
      GridArray e = read_fiog_block(in);
      if (!(b.grid == g) || !(e.grid == g)) throw FormatError("term grid differs from the symbol grid");
      if (b.domain != Domain::space || e.domain != Domain::frequency) throw FormatError("bad term domains");
      terms.push_back({GridFunction(g, std::move(b.values)), EtaProfile::table(Multiplier(g, std::move(e.values)))});
    }
    a = RoughSymbol::separable(g, std::move(terms));
  } else {
    throw FormatError("bad representation tag");
  }
  if (!in.done()) throw FormatError("trailing bytes after FIOS payload");
  return a;
}

void write_fiog(const std::filesystem::path& path, const GridArray& a, const nlohmann::json& provenance) {
  write_atomic(path, encode_fiog(a));
  nlohmann::json j = sidecar(a.grid, "FIOG", provenance);
  j["domain"] = a.domain == Domain::space ? "space" : "frequency";
  write_atomic(sidecar_path(path), j.dump(2) + "\n");
}

void write_fiog(const std::filesystem::path& path, const GridFunction& f, const nlohmann::json& provenance) {
  write_fiog(path, GridArray{f.grid, Domain::space, f.values}, provenance);
}

GridArray read_fiog(const std::filesystem::path& path) { return decode_fiog(read_file(path)); }

GridFunction read_grid_function(const std::filesystem::path& path) {
  GridArray a = read_fiog(path);
  if (a.domain == Domain::space) return GridFunction(a.grid, std::move(a.values));
  return inverse_dft(Spectrum(a.grid, std::move(a.values)));
}

void write_fios(const std::filesystem::path& path, const RoughSymbol& a, const nlohmann::json& provenance) {
  write_atomic(path, encode_fios(a));
  nlohmann::json j = sidecar(a.grid(), "FIOS", provenance);
  j["representation"] = a.is_dense() ? "dense" : "separable";
  j["rank"] = a.is_dense() ? 0 : a.rank();
  write_atomic(sidecar_path(path), j.dump(2) + "\n");
}

RoughSymbol read_fios(const std::filesystem::path& path) { return decode_fios(read_file(path)); }

}  // namespace fio
