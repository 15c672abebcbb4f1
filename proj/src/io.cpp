#include "rpcone/io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "rpcone/errors.hpp"

namespace rpcone {

using nlohmann::json;

namespace {

const char* kind_name(BlockKind kind) {
  switch (kind) {
    case BlockKind::kOrthant:
      return "orthant";
    case BlockKind::kLorentz:
      return "lorentz";
    case BlockKind::kPsd:
      return "psd";
  }
  return "?";
}

BlockKind kind_from_name(const std::string& name) {
  if (name == "orthant") return BlockKind::kOrthant;
  if (name == "lorentz") return BlockKind::kLorentz;
  if (name == "psd") return BlockKind::kPsd;
  throw FormatError("unknown block kind '" + name + "'");
}

Eigen::VectorXd vector_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string(what) + " must be an array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

json vector_to_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace

json cone_to_json(const ConeSpec& spec) {
  json out = json::array();
  for (const Block& b : spec.blocks()) out.push_back({{"kind", kind_name(b.kind)}, {"size", b.size}});
  return out;
}

ConeSpec cone_from_json(const json& j) {
  if (!j.is_array()) throw FormatError("cone must be an array of blocks");
  std::vector<Block> blocks;
  for (const json& b : j) blocks.push_back({kind_from_name(b.at("kind").get<std::string>()),
                                            b.at("size").get<int>()});
  return ConeSpec(std::move(blocks));
}

ConeSpec parse_cone(const std::string& text) {
  std::vector<Block> blocks;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw FormatError("cone block must look like kind:size");
    try {
      blocks.push_back({kind_from_name(item.substr(0, colon)), std::stoi(item.substr(colon + 1))});
    } catch (const std::invalid_argument&) {
      throw FormatError("bad block size in '" + item + "'");
    }
  }
  return ConeSpec(std::move(blocks));
}

json program_to_json(const ConicProgram& p) {
  json rows = json::array();
  for (int i = 0; i < p.num_constraints(); ++i)
    rows.push_back(vector_to_json(p.constraint_coords().row(i).transpose()));
  return {{"cone", cone_to_json(p.spec())},
          {"m", p.num_constraints()},
          {"theta", p.trace_bound()},
          {"c", vector_to_json(p.cost().coords())},
          {"b", vector_to_json(p.rhs())},
          {"A", std::move(rows)}};
}

ConicProgram program_from_json(const json& j) {
  try {
    ConeSpec spec = cone_from_json(j.at("cone"));
    const int m = j.at("m").get<int>();
    const json& rows = j.at("A");
    if (!rows.is_array() || static_cast<int>(rows.size()) != m)
      throw FormatError("A must have m rows");
    Eigen::MatrixXd a(m, spec.dim());
    for (int i = 0; i < m; ++i) {
      const Eigen::VectorXd row = vector_from_json(rows[i], "A row");
      if (row.size() != spec.dim()) throw FormatError("A row has wrong length");
      a.row(i) = row.transpose();
    }
    return ConicProgram(std::move(spec), std::move(a), vector_from_json(j.at("b"), "b"),
                        vector_from_json(j.at("c"), "c"), j.at("theta").get<double>());
  } catch (const json::exception& e) {
    throw FormatError(std::string("instance JSON: ") + e.what());
  } catch (const StructuralError& e) {
    throw FormatError(std::string("instance JSON: ") + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out << j.dump(1) << '\n';
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_program(const std::filesystem::path& path, const ConicProgram& p) {
  write_json(path, program_to_json(p));
}

ConicProgram read_program(const std::filesystem::path& path) {
  return program_from_json(read_json(path));
}

namespace {

// SDPA allows decorations such as "{2, 3}" or "=mdim"; keep numbers only.
std::vector<double> numbers_in(const std::string& line) {
  std::string cleaned = line;
  for (char& ch : cleaned)
    if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
  std::istringstream ss(cleaned);
  std::vector<double> out;
  std::string tok;
  while (ss >> tok) {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      out.push_back(v);
      if (used != tok.size()) break;
    } catch (const std::exception&) {
      break;
    }
  }
  return out;
}

}  // namespace

ConicProgram read_sdpa(std::istream& in, double theta) {
  std::string line;
  auto next_line = [&]() -> std::string {
    while (std::getline(in, line)) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      if (line[first] == '"' || line[first] == '*') continue;
      return line;
    }
    throw FormatError("SDPA: unexpected end of file");
  };

  const auto m_vals = numbers_in(next_line());
  if (m_vals.empty() || m_vals[0] < 1) throw FormatError("SDPA: bad constraint count");
  const int m = static_cast<int>(m_vals[0]);
  const auto nb_vals = numbers_in(next_line());
  if (nb_vals.empty() || nb_vals[0] < 1) throw FormatError("SDPA: bad block count");
  const int nblocks = static_cast<int>(nb_vals[0]);

  std::vector<double> sizes;
  while (static_cast<int>(sizes.size()) < nblocks) {
    const auto v = numbers_in(next_line());
    if (v.empty()) throw FormatError("SDPA: bad block structure line");
    sizes.insert(sizes.end(), v.begin(), v.end());
  }
  sizes.resize(nblocks);
  std::vector<Block> blocks;
  for (double s : sizes) {
    const int size = static_cast<int>(s);
    if (size == 0) throw FormatError("SDPA: zero block size");
    blocks.push_back(size > 0 ? Block{BlockKind::kPsd, size} : Block{BlockKind::kOrthant, -size});
  }
  ConeSpec spec(std::move(blocks));

  std::vector<double> c;
  while (static_cast<int>(c.size()) < m) {
    const auto v = numbers_in(next_line());
    if (v.empty()) throw FormatError("SDPA: bad objective vector");
    c.insert(c.end(), v.begin(), v.end());
  }

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, spec.dim());
  Eigen::VectorXd f0 = Eigen::VectorXd::Zero(spec.dim());
  while (std::getline(in, line)) {
    const auto v = numbers_in(line);
    if (v.empty()) continue;
    if (v.size() < 5) throw FormatError("SDPA: entry line needs 5 fields: " + line);
    const int mat = static_cast<int>(v[0]);
    const int blk = static_cast<int>(v[1]) - 1;
    int i = static_cast<int>(v[2]) - 1;
    int j = static_cast<int>(v[3]) - 1;
    const double value = v[4];
    if (mat < 0 || mat > m || blk < 0 || blk >= nblocks)
      throw FormatError("SDPA: entry index out of range: " + line);
    const Block& b = spec.blocks()[blk];
    if (i < 0 || j < 0 || i >= b.size || j >= b.size)
      throw FormatError("SDPA: entry position out of range: " + line);
    int coord = spec.offset(blk);
    double scaled = value;
    if (b.kind == BlockKind::kPsd) {
      if (i > j) std::swap(i, j);
      coord += svec_index(i, j);
      if (i != j) scaled *= std::numbers::sqrt2;
    } else {
      if (i != j) throw FormatError("SDPA: off-diagonal entry in a diagonal block: " + line);
      coord += i;
    }
    if (mat == 0) {
      f0(coord) = scaled;
    } else {
      a(mat - 1, coord) = scaled;
    }
  }

  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(c.data(), m);
  return ConicProgram(std::move(spec), std::move(a), std::move(b), -f0, theta);
}

ConicProgram read_sdpa(const std::filesystem::path& path, double theta) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_sdpa(in, theta);
}

}  // namespace rpcone
