#pragma once

// Code archive file format (text, LF, ASCII):
//
//   q n k count\n
//   #task <fingerprint>\n        (optional)
//   <k rows of n symbols>\n      per code, symbols are field element indices
//   \n                           blank line after every code
//   #complete\n | #partial\n
//
// Codes are serialized as systematic generator matrices; parsing accepts any
// valid generator matrix with the header's parameters.  Serialization of a
// parsed archive reproduces it byte for byte when the archive was produced by
// this writer.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "linclass/code.hpp"
#include "linclass/errors.hpp"

namespace linclass {

struct CodeArchive {
  int q = 0, n = 0, k = 0;
  std::vector<LinearCode> codes;
  bool complete = true;
  std::string task_fingerprint;  // empty = absent
};

inline std::string serialize_archive(const CodeArchive& ar) {
  std::ostringstream out;
  out << ar.q << ' ' << ar.n << ' ' << ar.k << ' ' << ar.codes.size() << '\n';
  if (!ar.task_fingerprint.empty()) out << "#task " << ar.task_fingerprint << '\n';
  for (const auto& code : ar.codes) {
    GeneratorMatrix gm = to_systematic_generator_matrix(code);
    for (const auto& row : gm.rows) {
      for (uint8_t s : row) out << static_cast<char>('0' + s);
      out << '\n';
    }
    out << '\n';
  }
  out << (ar.complete ? "#complete" : "#partial") << '\n';
  return out.str();
}

inline CodeArchive parse_archive(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty archive");
  CodeArchive ar;
  size_t count = 0;
  {
    std::istringstream hdr(line);
    if (!(hdr >> ar.q >> ar.n >> ar.k >> count)) throw ParseError("bad archive header");
  }
  const Field& f = field(ar.q);
  bool footer_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("#task ", 0) == 0) {
      ar.task_fingerprint = line.substr(6);
      continue;
    }
    if (line == "#complete" || line == "#partial") {
      ar.complete = (line == "#complete");
      footer_seen = true;
      break;
    }
    GeneratorMatrix gm;
    gm.q = ar.q;
    for (int i = 0; i < ar.k; ++i) {
      if (i > 0 && !std::getline(in, line)) throw ParseError("truncated matrix");
      if (static_cast<int>(line.size()) != ar.n) throw ParseError("row length mismatch");
      std::vector<uint8_t> row(ar.n);
      for (int j = 0; j < ar.n; ++j) {
        if (line[j] < '0' || line[j] > '8') throw ParseError("bad symbol in matrix row");
        row[j] = static_cast<uint8_t>(line[j] - '0');
      }
      gm.rows.push_back(std::move(row));
    }
    ar.codes.push_back(from_generator_matrix(f, gm));
  }
  if (!footer_seen) throw ParseError("missing #complete/#partial footer");
  if (ar.codes.size() != count) throw ParseError("archive count mismatch");
  return ar;
}

inline CodeArchive read_archive(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open archive: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_archive(buf.str());
}

// Atomic per-file write: temp file in the same directory, then rename.
inline void write_archive(const std::filesystem::path& path, const CodeArchive& ar) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write archive: " + tmp.string());
    out << serialize_archive(ar);
  }
  std::filesystem::rename(tmp, path);
}

inline uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace linclass
