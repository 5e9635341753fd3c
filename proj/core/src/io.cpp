#include "marblekit/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace marblekit {

void write_mesh(const TriMesh& M, const std::string& path, MeshFormat fmt) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot open " + path + " for writing");
  char buf[256];
  if (fmt == MeshFormat::Obj) {
    out << "# marblekit mesh, scene units\n";
    for (const auto& v : M.V) {
      std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
      out << buf;
    }
    for (const auto& f : M.F)
      out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  } else {
    out << "OFF\n" << M.nv() << ' ' << M.nf() << " 0\n";
    for (const auto& v : M.V) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v.x(), v.y(), v.z());
      out << buf;
    }
    for (const auto& f : M.F)
      out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
  }
  if (!out.good()) fail(ErrorCode::Io, "write failed for " + path);
}

TriMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);
  TriMesh M;
  std::string ext = path.size() > 4 ? path.substr(path.size() - 4) : "";
  std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
  if (ext == ".obj") {
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ss(line);
      std::string tag;
      ss >> tag;
      if (tag == "v") {
        double x, y, z;
        ss >> x >> y >> z;
        M.V.emplace_back(x, y, z);
      } else if (tag == "f") {
        std::vector<int> idx;
        std::string tok;
        while (ss >> tok) {
          idx.push_back(std::stoi(tok.substr(0, tok.find('/'))) - 1);
        }
        for (std::size_t k = 2; k < idx.size(); ++k)
          M.F.push_back({idx[0], idx[static_cast<int>(k) - 1], idx[static_cast<int>(k)]});
      }
    }
  } else if (ext == ".off") {
    std::string header;
    in >> header;
    if (header != "OFF") fail(ErrorCode::Io, "bad OFF header in " + path);
    int nv, nf, ne;
    in >> nv >> nf >> ne;
    M.V.resize(nv);
    for (auto& v : M.V) in >> v.x() >> v.y() >> v.z();
    for (int f = 0; f < nf; ++f) {
      int k;
      in >> k;
      std::vector<int> idx(k);
      for (auto& i : idx) in >> i;
      for (int j = 2; j < k; ++j) M.F.push_back({idx[0], idx[j - 1], idx[j]});
    }
  } else {
    fail(ErrorCode::Io, "unknown mesh extension: " + path);
  }
  if (M.V.empty() || M.F.empty()) fail(ErrorCode::Io, "empty mesh in " + path);
  return M;
}

std::string curve_to_json(const SkeletonCurve& c) {
  nlohmann::json j;
  j["closed"] = c.closed;
  j["h"] = c.h;
  auto& pts = j["points"] = nlohmann::json::array();
  for (const auto& p : c.samples) pts.push_back({p.x(), p.y(), p.z()});
  return j.dump();
}

SkeletonCurve curve_from_json(const std::string& text, double h_s) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<Vec3> pts;
  for (const auto& p : j.at("points"))
    pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>());
  bool closed = j.value("closed", false);
  double h = h_s > 0 ? h_s : j.value("h", 0.0);
  if (h <= 0 && pts.size() >= 2) {
    double len = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) len += (pts[i] - pts[i - 1]).norm();
    h = len / (pts.size() - 1);
  }
  return curve_from_points(pts, closed, h);
}

}  // namespace marblekit
