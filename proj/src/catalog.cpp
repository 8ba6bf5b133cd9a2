#include "srcwb/catalog.hpp"

#include <algorithm>
#include <set>

#include "srcwb/csv.hpp"
#include "srcwb/error.hpp"

namespace fs = std::filesystem;

namespace srcwb {

namespace headers {
const std::vector<std::string> projects = {"project_id", "project_path", "project_name"};
const std::vector<std::string> packages = {"project_id", "package_id", "package_path",
                                           "package_name"};
const std::vector<std::string> classes = {"project_id", "package_id", "class_id", "class_path",
                                          "class_name"};
const std::vector<std::string> methods = {"project_id",  "package_id",  "class_id",
                                          "method_id",   "method_path", "method_name",
                                          "start_line",  "end_line",    "method_signature"};
}  // namespace headers

// ---- Catalog ----------------------------------------------------------------

void Catalog::add_project(const ProjectCatalog& pc) {
  if (kinds_.count(pc.project.project_id)) {
    throw Error(ErrorKind::Duplicate, "project '" + pc.project.project_path + "' is already cataloged");
  }
  // Keep whole projects contiguous and ordered by path so that the tables do
  // not depend on the order in which projects were added.
  auto pos = std::upper_bound(
      projects_.begin(), projects_.end(), pc.project.project_path,
      [](const std::string& path, const ProjectMeta& p) { return path < p.project_path; });
  const EntityId* next_project =
      pos == projects_.end() ? nullptr : &pos->project_id;
  auto insert_before = [&](auto& table, const auto& rows) {
    auto at = table.end();
    if (next_project) {
      at = std::find_if(table.begin(), table.end(),
                        [&](const auto& r) { return r.project_id == *next_project; });
    }
    table.insert(at, rows.begin(), rows.end());
  };
  insert_before(packages_, pc.packages);
  insert_before(classes_, pc.classes);
  insert_before(methods_, pc.methods);
  projects_.insert(pos, pc.project);
  reindex();
}

bool Catalog::remove_project(const EntityId& project_id) {
  auto it = std::find_if(projects_.begin(), projects_.end(),
                         [&](const ProjectMeta& p) { return p.project_id == project_id; });
  if (it == projects_.end()) return false;
  projects_.erase(it);
  auto drop = [&](auto& table) {
    table.erase(std::remove_if(table.begin(), table.end(),
                               [&](const auto& r) { return r.project_id == project_id; }),
                table.end());
  };
  drop(packages_);
  drop(classes_);
  drop(methods_);
  reindex();
  return true;
}

void Catalog::reindex() {
  kinds_.clear();
  row_.clear();
  children_.clear();
  auto put = [&](const EntityId& id, EntityKind kind, std::size_t row) {
    if (!kinds_.emplace(id, kind).second) {
      throw Error(ErrorKind::Duplicate, "entity id " + id.hex() + " occurs twice");
    }
    row_[id] = row;
    children_[id];
  };
  for (std::size_t i = 0; i < projects_.size(); ++i) {
    put(projects_[i].project_id, EntityKind::Project, i);
  }
  for (std::size_t i = 0; i < packages_.size(); ++i) {
    put(packages_[i].package_id, EntityKind::Package, i);
    children_[packages_[i].project_id].push_back(packages_[i].package_id);
  }
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    put(classes_[i].class_id, EntityKind::Class, i);
    children_[classes_[i].package_id].push_back(classes_[i].class_id);
  }
  for (std::size_t i = 0; i < methods_.size(); ++i) {
    put(methods_[i].method_id, EntityKind::Method, i);
    children_[methods_[i].class_id].push_back(methods_[i].method_id);
  }
}

namespace {
template <typename T>
const T* lookup(const std::map<EntityId, EntityKind>& kinds,
                const std::map<EntityId, std::size_t>& rows, const std::vector<T>& table,
                const EntityId& id, EntityKind kind) {
  auto k = kinds.find(id);
  if (k == kinds.end() || k->second != kind) return nullptr;
  return &table[rows.at(id)];
}
}  // namespace

const ProjectMeta* Catalog::find_project(const EntityId& id) const {
  return lookup(kinds_, row_, projects_, id, EntityKind::Project);
}
const PackageMeta* Catalog::find_package(const EntityId& id) const {
  return lookup(kinds_, row_, packages_, id, EntityKind::Package);
}
const ClassMeta* Catalog::find_class(const EntityId& id) const {
  return lookup(kinds_, row_, classes_, id, EntityKind::Class);
}
const MethodMeta* Catalog::find_method(const EntityId& id) const {
  return lookup(kinds_, row_, methods_, id, EntityKind::Method);
}

EntityKind Catalog::kind_of(const EntityId& id) const {
  auto it = kinds_.find(id);
  if (it == kinds_.end()) throw Error(ErrorKind::NotFound, "unknown entity id " + id.hex());
  return it->second;
}

std::optional<EntityId> Catalog::parent(const EntityId& id) const {
  switch (kind_of(id)) {
    case EntityKind::Project: return std::nullopt;
    case EntityKind::Package: return find_package(id)->project_id;
    case EntityKind::Class: return find_class(id)->package_id;
    case EntityKind::Method: return find_method(id)->class_id;
  }
  return std::nullopt;
}

std::vector<EntityId> Catalog::children(const EntityId& id) const {
  kind_of(id);
  return children_.at(id);
}

std::size_t Catalog::class_count(const EntityId& project_id) const {
  return static_cast<std::size_t>(std::count_if(
      classes_.begin(), classes_.end(),
      [&](const ClassMeta& c) { return c.project_id == project_id; }));
}

void Catalog::validate() const {
  auto need = [&](const EntityId& id, EntityKind kind, const std::string& what) {
    auto it = kinds_.find(id);
    if (it == kinds_.end() || it->second != kind) {
      throw Error(ErrorKind::InvalidArgument, what + " refers to missing " +
                                                  std::string(to_string(kind)) + " " + id.hex());
    }
  };
  for (const auto& p : packages_) need(p.project_id, EntityKind::Project, "package " + p.package_path);
  for (const auto& c : classes_) {
    need(c.project_id, EntityKind::Project, "class " + c.class_path);
    need(c.package_id, EntityKind::Package, "class " + c.class_path);
    if (find_package(c.package_id)->project_id != c.project_id) {
      throw Error(ErrorKind::InvalidArgument, "class " + c.class_path + " has inconsistent parents");
    }
  }
  for (const auto& m : methods_) {
    const std::string what = "method " + m.method_path + "#" + m.method_signature;
    need(m.project_id, EntityKind::Project, what);
    need(m.package_id, EntityKind::Package, what);
    need(m.class_id, EntityKind::Class, what);
    const ClassMeta* c = find_class(m.class_id);
    if (c->package_id != m.package_id || c->project_id != m.project_id) {
      throw Error(ErrorKind::InvalidArgument, what + " has inconsistent parents");
    }
    if (m.start_line > m.end_line) {
      throw Error(ErrorKind::InvalidArgument, what + " has start_line > end_line");
    }
  }
}

// ---- cataloging -------------------------------------------------------------

namespace {

std::string rel(const fs::path& p, const fs::path& base) {
  return p.lexically_normal().lexically_relative(base.lexically_normal()).generic_string();
}

bool is_source_file(const fs::path& p) { return p.extension() == ".java"; }

std::string class_key_for(const std::string& file, const CompilationUnit& unit,
                          const std::string& type_name) {
  if (unit.types.size() == 1) return class_key(file);
  return class_key(file) + "#" + type_name;
}

}  // namespace

std::vector<fs::path> list_projects(const fs::path& corpus_root) {
  if (!fs::is_directory(corpus_root)) {
    throw Error(ErrorKind::NotFound, "corpus root '" + corpus_root.string() + "' is not a directory");
  }
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(corpus_root)) {
    if (e.is_directory()) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

ProjectCatalog catalog_project(const fs::path& corpus_root, const fs::path& project_dir,
                               std::vector<SourceFile>* files) {
  if (!fs::is_directory(project_dir)) {
    throw Error(ErrorKind::NotFound, "project directory '" + project_dir.string() + "' does not exist");
  }
  ProjectCatalog pc;
  const fs::path root = fs::absolute(corpus_root);
  const fs::path dir = fs::absolute(project_dir);
  pc.project.project_path = rel(dir, root);
  pc.project.project_name = dir.lexically_normal().filename().string();
  if (pc.project.project_name.empty()) {
    pc.project.project_name = dir.lexically_normal().parent_path().filename().string();
  }
  pc.project.project_id =
      assign_id(EntityKind::Project, project_key(pc.project.project_name, pc.project.project_path));

  std::vector<fs::path> paths;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && is_source_file(e.path())) paths.push_back(e.path());
  }
  std::sort(paths.begin(), paths.end(),
            [&](const fs::path& a, const fs::path& b) { return rel(a, root) < rel(b, root); });

  std::vector<SourceFile> parsed;
  for (const auto& p : paths) {
    SourceFile sf;
    sf.relpath = rel(p, root);
    try {
      sf.text = csv::read_text(p);
      sf.unit = parse(sf.text);
    } catch (const PositionedError& e) {
      pc.diagnostics.push_back({sf.relpath, e.line(), e.col(), e.detail()});
      continue;
    } catch (const Error& e) {
      pc.diagnostics.push_back({sf.relpath, 0, 0, e.what()});
      continue;
    }
    if (sf.unit.types.empty()) continue;
    sf.methods = extract_methods(sf.unit, sf.text, sf.relpath);
    parsed.push_back(std::move(sf));
  }
  if (parsed.empty()) {
    throw Error(ErrorKind::EmptyProject,
                "project '" + pc.project.project_path + "' has no parseable source file");
  }

  std::map<std::string, std::size_t> package_of_dir;
  std::set<EntityId> seen;
  for (SourceFile& sf : parsed) {
    const std::string pkg_dir = fs::path(sf.relpath).parent_path().generic_string();
    auto [it, fresh] = package_of_dir.emplace(pkg_dir, pc.packages.size());
    if (fresh) {
      PackageMeta pm;
      pm.project_id = pc.project.project_id;
      std::string within = rel(root / pkg_dir, dir);
      if (within == ".") within.clear();
      pm.package_id = assign_id(EntityKind::Package, package_key(pc.project.project_path, within));
      pm.package_path = pkg_dir;
      pm.package_name = sf.unit.package_name;
      pc.packages.push_back(std::move(pm));
    }
    const PackageMeta& pkg = pc.packages[it->second];

    std::map<std::string, EntityId> class_ids;
    for (const TypeInfo& t : sf.unit.types) {
      ClassMeta cm;
      cm.project_id = pc.project.project_id;
      cm.package_id = pkg.package_id;
      cm.class_id = assign_id(EntityKind::Class, class_key_for(sf.relpath, sf.unit, t.name));
      cm.class_path = sf.relpath;
      cm.class_name = t.name;
      class_ids[t.name] = cm.class_id;
      pc.classes.push_back(std::move(cm));
    }
    std::vector<MethodSource> kept;
    for (MethodSource& ms : sf.methods) {
      if (!seen.insert(ms.method_id).second) {
        pc.diagnostics.push_back({sf.relpath, ms.start_line, 0,
                                  "duplicate method " + ms.signature + " skipped"});
        continue;
      }
      MethodMeta mm;
      mm.project_id = pc.project.project_id;
      mm.package_id = pkg.package_id;
      mm.class_id = class_ids.at(ms.class_name);
      mm.method_id = ms.method_id;
      mm.method_path = sf.relpath;
      mm.method_name = ms.name;
      mm.start_line = ms.start_line;
      mm.end_line = ms.end_line;
      mm.method_signature = ms.signature;
      pc.methods.push_back(std::move(mm));
      kept.push_back(std::move(ms));
    }
    sf.methods = std::move(kept);
  }
  std::stable_sort(pc.packages.begin(), pc.packages.end(),
                   [](const PackageMeta& a, const PackageMeta& b) {
                     return a.package_path < b.package_path;
                   });
  if (files) {
    for (auto& sf : parsed) files->push_back(std::move(sf));
  }
  return pc;
}

std::vector<SourceFile> load_sources(const fs::path& corpus_root, const Catalog& catalog) {
  std::vector<SourceFile> out;
  std::set<std::string> done;
  for (const ClassMeta& c : catalog.classes()) {
    if (!done.insert(c.class_path).second) continue;
    SourceFile sf;
    sf.relpath = c.class_path;
    const fs::path p = corpus_root / c.class_path;
    if (!fs::exists(p)) {
      throw Error(ErrorKind::MissingArtifact, "cataloged file '" + c.class_path + "' is missing");
    }
    sf.text = csv::read_text(p);
    try {
      sf.unit = parse(sf.text);
    } catch (const PositionedError& e) {
      throw Error(ErrorKind::Parse, c.class_path + ":" + e.what());
    }
    std::vector<MethodSource> all = extract_methods(sf.unit, sf.text, sf.relpath);
    for (auto& m : all) {
      if (catalog.find_method(m.method_id)) sf.methods.push_back(std::move(m));
    }
    out.push_back(std::move(sf));
  }
  return out;
}

// ---- CSV IO -----------------------------------------------------------------

void write_metadata(const Catalog& catalog, const fs::path& dir) {
  std::vector<csv::Row> rows;
  for (const auto& p : catalog.projects()) {
    rows.push_back({p.project_id.hex(), p.project_path, p.project_name});
  }
  csv::write_file(dir / "projects.csv", headers::projects, rows);
  rows.clear();
  for (const auto& p : catalog.packages()) {
    rows.push_back({p.project_id.hex(), p.package_id.hex(), p.package_path, p.package_name});
  }
  csv::write_file(dir / "packages.csv", headers::packages, rows);
  rows.clear();
  for (const auto& c : catalog.classes()) {
    rows.push_back(
        {c.project_id.hex(), c.package_id.hex(), c.class_id.hex(), c.class_path, c.class_name});
  }
  csv::write_file(dir / "classes.csv", headers::classes, rows);
  rows.clear();
  for (const auto& m : catalog.methods()) {
    rows.push_back({m.project_id.hex(), m.package_id.hex(), m.class_id.hex(), m.method_id.hex(),
                    m.method_path, m.method_name, std::to_string(m.start_line),
                    std::to_string(m.end_line), m.method_signature});
  }
  csv::write_file(dir / "methods.csv", headers::methods, rows);
}

namespace {

EntityId id_field(const csv::Table& t, std::size_t r, std::size_t c) {
  try {
    return EntityId::from_hex(t.rows[r][c]);
  } catch (const Error& e) {
    throw PositionedError(ErrorKind::Parse, t.row_lines[r], static_cast<int>(c) + 1, e.what());
  }
}

int int_field(const csv::Table& t, std::size_t r, std::size_t c) {
  const std::string& s = t.rows[r][c];
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || v < 1) {
    throw PositionedError(ErrorKind::Parse, t.row_lines[r], static_cast<int>(c) + 1,
                          "expected a positive line number, got '" + s + "'");
  }
  return v;
}

}  // namespace

Catalog read_metadata(const fs::path& dir) {
  const csv::Table pt = csv::read_file(dir / "projects.csv", headers::projects);
  const csv::Table kt = csv::read_file(dir / "packages.csv", headers::packages);
  const csv::Table ct = csv::read_file(dir / "classes.csv", headers::classes);
  const csv::Table mt = csv::read_file(dir / "methods.csv", headers::methods);

  std::map<EntityId, ProjectCatalog> parts;
  std::vector<EntityId> order;
  for (std::size_t r = 0; r < pt.rows.size(); ++r) {
    ProjectMeta p{id_field(pt, r, 0), pt.rows[r][1], pt.rows[r][2]};
    if (parts.count(p.project_id)) {
      throw PositionedError(ErrorKind::Parse, pt.row_lines[r], 1, "duplicate project id");
    }
    order.push_back(p.project_id);
    parts[p.project_id].project = std::move(p);
  }
  auto owner = [&](const csv::Table& t, std::size_t r) -> ProjectCatalog& {
    EntityId id = id_field(t, r, 0);
    auto it = parts.find(id);
    if (it == parts.end()) {
      throw PositionedError(ErrorKind::Parse, t.row_lines[r], 1, "unknown project id " + id.hex());
    }
    return it->second;
  };
  for (std::size_t r = 0; r < kt.rows.size(); ++r) {
    owner(kt, r).packages.push_back(
        {id_field(kt, r, 0), id_field(kt, r, 1), kt.rows[r][2], kt.rows[r][3]});
  }
  for (std::size_t r = 0; r < ct.rows.size(); ++r) {
    owner(ct, r).classes.push_back({id_field(ct, r, 0), id_field(ct, r, 1), id_field(ct, r, 2),
                                    ct.rows[r][3], ct.rows[r][4]});
  }
  for (std::size_t r = 0; r < mt.rows.size(); ++r) {
    MethodMeta m{id_field(mt, r, 0),   id_field(mt, r, 1), id_field(mt, r, 2),
                 id_field(mt, r, 3),   mt.rows[r][4],      mt.rows[r][5],
                 int_field(mt, r, 6),  int_field(mt, r, 7), mt.rows[r][8]};
    parse_signature(m.method_signature);
    owner(mt, r).methods.push_back(std::move(m));
  }
  Catalog cat;
  for (const EntityId& id : order) cat.add_project(parts.at(id));
  cat.validate();
  return cat;
}

char size_bucket(std::size_t class_count) {
  if (class_count <= 20) return 'A';
  if (class_count <= 50) return 'B';
  if (class_count <= 100) return 'C';
  return 'D';
}

}  // namespace srcwb
