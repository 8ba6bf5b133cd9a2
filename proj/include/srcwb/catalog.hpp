#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "srcwb/entity_id.hpp"
#include "srcwb/parser.hpp"

namespace srcwb {

struct ProjectMeta {
  EntityId project_id;
  std::string project_path;  // relative to the corpus root
  std::string project_name;

  bool operator==(const ProjectMeta&) const = default;
};

struct PackageMeta {
  EntityId project_id;
  EntityId package_id;
  std::string package_path;  // source directory, relative to the corpus root
  std::string package_name;  // dotted name from the package declaration; empty for the default package

  bool operator==(const PackageMeta&) const = default;
};

struct ClassMeta {
  EntityId project_id;
  EntityId package_id;
  EntityId class_id;
  std::string class_path;  // source file, relative to the corpus root
  std::string class_name;

  bool operator==(const ClassMeta&) const = default;
};

struct MethodMeta {
  EntityId project_id;
  EntityId package_id;
  EntityId class_id;
  EntityId method_id;
  std::string method_path;
  std::string method_name;
  int start_line = 0;
  int end_line = 0;
  std::string method_signature;

  bool operator==(const MethodMeta&) const = default;
};

struct Diagnostic {
  std::string file;
  int line = 0;
  int col = 0;
  std::string message;
};

/// Rows for one project plus the files that could not be cataloged.
struct ProjectCatalog {
  ProjectMeta project;
  std::vector<PackageMeta> packages;
  std::vector<ClassMeta> classes;
  std::vector<MethodMeta> methods;
  std::vector<Diagnostic> diagnostics;
};

/// A parsed source file and its extracted methods.
struct SourceFile {
  std::string relpath;
  std::string text;
  CompilationUnit unit;
  std::vector<MethodSource> methods;
};

/// All metadata rows of a corpus with a hierarchy index. Rows keep
/// insertion order; projects are kept sorted by path.
class Catalog {
 public:
  Catalog() = default;

  /// Throws Duplicate if the project id is already present.
  void add_project(const ProjectCatalog& pc);
  /// Removes every row of the project. Returns false if it was absent.
  bool remove_project(const EntityId& project_id);

  const std::vector<ProjectMeta>& projects() const { return projects_; }
  const std::vector<PackageMeta>& packages() const { return packages_; }
  const std::vector<ClassMeta>& classes() const { return classes_; }
  const std::vector<MethodMeta>& methods() const { return methods_; }

  const ProjectMeta* find_project(const EntityId& id) const;
  const PackageMeta* find_package(const EntityId& id) const;
  const ClassMeta* find_class(const EntityId& id) const;
  const MethodMeta* find_method(const EntityId& id) const;
  bool contains(const EntityId& id) const { return kinds_.count(id) != 0; }
  /// Throws NotFound for unknown ids.
  EntityKind kind_of(const EntityId& id) const;

  /// Parent one level up; nullopt for projects. Throws NotFound.
  std::optional<EntityId> parent(const EntityId& id) const;
  /// Children one level down, in row order. Throws NotFound.
  std::vector<EntityId> children(const EntityId& id) const;
  /// Number of classes owned by the project.
  std::size_t class_count(const EntityId& project_id) const;

  /// Throws InvalidArgument when a foreign id is dangling or an id repeats.
  void validate() const;

  bool operator==(const Catalog& o) const {
    return projects_ == o.projects_ && packages_ == o.packages_ && classes_ == o.classes_ &&
           methods_ == o.methods_;
  }

 private:
  void reindex();

  std::vector<ProjectMeta> projects_;
  std::vector<PackageMeta> packages_;
  std::vector<ClassMeta> classes_;
  std::vector<MethodMeta> methods_;
  std::map<EntityId, EntityKind> kinds_;
  std::map<EntityId, std::size_t> row_;  // index into the table of its kind
  std::map<EntityId, std::vector<EntityId>> children_;
};

/// Catalogs one project directory below `corpus_root`. Files that fail to
/// lex or parse are recorded as diagnostics and skipped. Throws EmptyProject
/// when no method-bearing source file survives. When `files` is non-null the
/// parsed files of the project are appended to it.
ProjectCatalog catalog_project(const std::filesystem::path& corpus_root,
                               const std::filesystem::path& project_dir,
                               std::vector<SourceFile>* files = nullptr);

/// Project size bucket: 'A' up to 20 classes, 'B' 21-50, 'C' 51-100, 'D' above 100.
char size_bucket(std::size_t class_count);

/// Every immediate subdirectory of the corpus root, sorted by name.
std::vector<std::filesystem::path> list_projects(const std::filesystem::path& corpus_root);

/// Re-parses the class files of a catalog. Throws Parse when a cataloged file
/// no longer parses.
std::vector<SourceFile> load_sources(const std::filesystem::path& corpus_root,
                                     const Catalog& catalog);

/// Writes projects.csv, packages.csv, classes.csv and methods.csv.
void write_metadata(const Catalog& catalog, const std::filesystem::path& dir);
Catalog read_metadata(const std::filesystem::path& dir);

namespace headers {
extern const std::vector<std::string> projects;
extern const std::vector<std::string> packages;
extern const std::vector<std::string> classes;
extern const std::vector<std::string> methods;
}  // namespace headers

}  // namespace srcwb
