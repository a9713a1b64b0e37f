#include "cdqvi/instance_io.hpp"

#include "cdqvi/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace cdqvi {

using nlohmann::json;

namespace {

json matrix_to_json(const Mat& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

const json& field(const json& doc, const char* key) {
  require(doc.contains(key), ErrorKind::Parse, std::string("instance file is missing \"") + key + "\"");
  return doc.at(key);
}

Mat matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols, const char* name) {
  require(j.is_array(), ErrorKind::Parse, std::string(name) + " must be an array of rows");
  require(static_cast<Eigen::Index>(j.size()) == rows, ErrorKind::InvalidInstance,
          std::string(name) + ": expected " + std::to_string(rows) + " rows");
  Mat a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    require(row.is_array() && static_cast<Eigen::Index>(row.size()) == cols,
            ErrorKind::InvalidInstance,
            std::string(name) + ": row " + std::to_string(i) + " must have " +
                std::to_string(cols) + " entries");
    for (Eigen::Index k = 0; k < cols; ++k) {
      const auto& x = row[static_cast<std::size_t>(k)];
      require(x.is_number(), ErrorKind::Parse, std::string(name) + " entries must be numbers");
      a(i, k) = x.get<double>();
    }
  }
  return a;
}

Vec vector_from_json(const json& j, Eigen::Index size, const char* name) {
  require(j.is_array(), ErrorKind::Parse, std::string(name) + " must be an array");
  require(static_cast<Eigen::Index>(j.size()) == size, ErrorKind::InvalidInstance,
          std::string(name) + ": expected " + std::to_string(size) + " entries");
  Vec v(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    const auto& x = j[static_cast<std::size_t>(i)];
    require(x.is_number(), ErrorKind::Parse, std::string(name) + " entries must be numbers");
    v(i) = x.get<double>();
  }
  return v;
}

Mat square_from_json(const json& j, const char* name) {
  require(j.is_array() && !j.empty(), ErrorKind::Parse, std::string(name) + " must be a nonempty matrix");
  const auto n = static_cast<Eigen::Index>(j.size());
  return matrix_from_json(j, n, n, name);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string instance_to_json(const ContactProblem& problem) {
  const auto& inst = problem.instance;
  json doc;
  doc["N"] = inst.n();
  doc["m"] = inst.m();
  doc["A"] = matrix_to_json(inst.A());
  doc["B"] = matrix_to_json(inst.B());
  doc["c"] = vector_to_json(inst.c());
  doc["D"] = matrix_to_json(inst.D());
  doc["e"] = vector_to_json(inst.e());
  doc["phi"] = problem.phi;
  doc["l"] = problem.l;
  doc["meta"] = json::parse(problem.meta_json.empty() ? "{}" : problem.meta_json);
  return doc.dump(1) + "\n";
}

ContactProblem instance_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& ex) {
    throw Error(ErrorKind::Parse, std::string("malformed instance file: ") + ex.what());
  }
  require(doc.is_object(), ErrorKind::Parse, "instance file must be a JSON object");

  const auto& jn = field(doc, "N");
  const auto& jm = field(doc, "m");
  require(jn.is_number_integer() && jm.is_number_integer(), ErrorKind::Parse,
          "N and m must be integers");
  const auto n = jn.get<Eigen::Index>();
  const auto m = jm.get<Eigen::Index>();
  require(n > 0 && n % 2 == 0, ErrorKind::InvalidInstance, "N must be a positive even integer");
  require(m == 2 * n, ErrorKind::InvalidInstance,
          "m must equal 2N (got m=" + std::to_string(m) + ", N=" + std::to_string(n) + ")");

  Mat A = matrix_from_json(field(doc, "A"), m, n, "A");
  Mat B = matrix_from_json(field(doc, "B"), m, n, "B");
  Vec c = vector_from_json(field(doc, "c"), m, "c");

  const bool has_c = doc.contains("C");
  const bool has_d = doc.contains("D");
  require(has_c != has_d, ErrorKind::Parse, "exactly one of \"C\" or \"D\" is required");
  const bool has_f = doc.contains("fext");
  const bool has_e = doc.contains("e");
  require(has_f != has_e, ErrorKind::Parse, "exactly one of \"fext\" or \"e\" is required");

  Mat D;
  if (has_d) {
    D = matrix_from_json(doc.at("D"), n, n, "D");
  } else {
    Mat C = matrix_from_json(doc.at("C"), n, n, "C");
    Eigen::LLT<Mat> llt(C);
    require(llt.info() == Eigen::Success, ErrorKind::InvalidInstance,
            "C is not symmetric positive definite");
    D = llt.solve(Mat::Identity(n, n));
    D = (0.5 * (D + D.transpose())).eval();
  }
  Vec e = has_e ? vector_from_json(doc.at("e"), n, "e")
                : Vec(-(D * vector_from_json(doc.at("fext"), n, "fext")));

  const auto& jphi = field(doc, "phi");
  const auto& jl = field(doc, "l");
  require(jphi.is_number() && jl.is_number(), ErrorKind::Parse, "phi and l must be numbers");
  std::string meta = doc.contains("meta") ? doc.at("meta").dump() : "{}";

  return ContactProblem{AqviInstance(std::move(A), std::move(B), std::move(c), std::move(D), std::move(e)),
                        jphi.get<double>(), jl.get<double>(), std::move(meta)};
}

void save_instance(const ContactProblem& problem, const std::filesystem::path& path) {
  const std::string text = instance_to_json(problem);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot write " + path.string());
  out << text;
  out.flush();
  require(static_cast<bool>(out), ErrorKind::Io, "write failed for " + path.string());
}

ContactProblem load_instance(const std::filesystem::path& path) {
  return instance_from_json(read_file(path));
}

Mat load_stiffness_file(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& ex) {
    throw Error(ErrorKind::Parse, std::string("malformed stiffness file: ") + ex.what());
  }
  require(doc.is_object() && doc.contains("C"), ErrorKind::Parse,
          "stiffness file must be an object with a \"C\" matrix");
  return square_from_json(doc.at("C"), "C");
}

}  // namespace cdqvi
