#include "workauth/batch.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "workauth/error.hpp"
#include "workauth/tei.hpp"

namespace fs = std::filesystem;

namespace workauth {

std::vector<fs::path> expand_inputs(const std::vector<fs::path>& inputs) {
  std::vector<fs::path> out;
  for (const auto& input : inputs) {
    if (fs::is_directory(input)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::recursive_directory_iterator(input))
        if (entry.is_regular_file() && entry.path().extension() == ".xml") found.push_back(entry.path());
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else if (fs::exists(input)) {
      out.push_back(input);
    } else {
      throw Error("IO_ERROR", input.string() + ": no such file or directory");
    }
  }
  return out;
}

namespace {

FileOutcome load_one(const fs::path& path, const NamespaceTable& ns, const Taxonomy& taxonomy) {
  FileOutcome outcome;
  outcome.path = path;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    outcome.io_error = true;
    outcome.report.add(Severity::error, "IO_ERROR", "", "cannot read file");
    return outcome;
  }
  std::ostringstream text;
  text << in.rdbuf();
  try {
    auto record = parse_work_record(text.str());
    outcome.report = validate_record(record, ns);
    outcome.report.append(validate_subject_codes(record, taxonomy));
    outcome.report.sort();
    outcome.record = std::move(record);
  } catch (const Error& e) {
    outcome.report.add(Severity::error, e.code(), "", e.what());
  }
  return outcome;
}

}  // namespace

std::vector<FileOutcome> load_records_serial(const std::vector<fs::path>& files, const NamespaceTable& ns,
                                             const Taxonomy& taxonomy) {
  std::vector<FileOutcome> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(load_one(f, ns, taxonomy));
  return out;
}

std::vector<FileOutcome> load_records(const std::vector<fs::path>& files, const NamespaceTable& ns,
                                      const Taxonomy& taxonomy) {
  std::vector<FileOutcome> out(files.size());
  const auto n = static_cast<std::ptrdiff_t>(files.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    out[ui] = load_one(files[ui], ns, taxonomy);
  }
  return out;
}

}  // namespace workauth
