// Copies a project and pads it with generated classes until it holds the
// requested number of top-level classes, so fixtures can reach every size bucket.
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "srcwb/catalog.hpp"
#include "srcwb/csv.hpp"
#include "srcwb/error.hpp"

namespace fs = std::filesystem;

namespace {

// Each filler class makes one Local, one Package and one API call, except the
// first, which has no earlier sibling to call.
std::string filler_class(const std::string& package, int k) {
  const std::string name = "Filler" + std::to_string(k);
  std::string s = "package " + package + ";\n\npublic class " + name + " {\n";
  s += "    public static int step(int x) {\n";
  s += "        int y = twice(x) + " + std::to_string(k) + ";\n";
  if (k > 0) {
    s += "        if (y > 100) {\n";
    s += "            y = Filler" + std::to_string(k - 1) + ".step(y - 100);\n";
    s += "        }\n";
  }
  s += "        return Math.max(y, x);\n    }\n\n";
  s += "    static int twice(int v) {\n        return v + v;\n    }\n}\n";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pad a project with generated classes"};
  std::string src, dest, package = "filler";
  std::size_t classes = 0;
  bool force = false;
  app.add_option("source", src, "Project to copy")->required()->check(CLI::ExistingDirectory);
  app.add_option("dest", dest, "New project directory")->required();
  app.add_option("--classes", classes, "Total top-level classes wanted")->required();
  app.add_option("--package", package, "Package of the generated classes");
  app.add_flag("--force", force, "Overwrite an existing destination");
  CLI11_PARSE(app, argc, argv);

  try {
    if (fs::exists(dest)) {
      if (!force) {
        std::cerr << "destination " << dest << " exists; pass --force\n";
        return 2;
      }
      fs::remove_all(dest);
    }
    fs::create_directories(fs::path(dest).parent_path());
    fs::copy(src, dest, fs::copy_options::recursive);
    const fs::path root = fs::absolute(dest).lexically_normal();
    const std::size_t have = srcwb::catalog_project(root.parent_path(), root).classes.size();
    if (have > classes) {
      std::cerr << "project already has " << have << " classes\n";
      return 2;
    }
    std::string pkg_dir = package;
    for (char& c : pkg_dir) {
      if (c == '.') c = '/';
    }
    const int added = static_cast<int>(classes - have);
    for (int k = 0; k < added; ++k) {
      const fs::path file = root / "src" / pkg_dir / ("Filler" + std::to_string(k) + ".java");
      srcwb::csv::write_text(file, filler_class(package, k));
    }
    std::cout << "{\"status\":\"ok\",\"classes\":" << classes << ",\"added\":" << added << "}\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
