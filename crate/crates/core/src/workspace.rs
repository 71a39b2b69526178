//! Manifests: named groups, families, modules, complexes and filtrations
//! loaded from one JSON file and validated on load.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

use crate::complex::{close_under_faces, Filtration, GammaComplex};
use crate::group::{Element, Family, FiniteGroup, Subgroup};
use crate::linalg::{FpAbelianGroup, IntMatrix};
use crate::module::{BredonModule, Variance};
use crate::orbit::{GammaSet, OrbitCategory};

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("{path}: cannot read: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {context}: {message}")]
    Validation {
        path: PathBuf,
        context: String,
        message: String,
    },
    #[error("{path}: {what} `{name}` is not defined")]
    Unresolved { path: PathBuf, what: &'static str, name: String },
    #[error("{path}: no {what} selected and the manifest defines {count}")]
    Ambiguous {
        path: PathBuf,
        what: &'static str,
        count: usize,
    },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Table {
        order: usize,
        table: Vec<Vec<Element>>,
        labels: Option<Vec<String>>,
    },
    Permutations {
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
    Cyclic {
        cyclic: usize,
    },
    Symmetric {
        symmetric: usize,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub group: String,
    #[serde(default)]
    pub subgroups: Vec<Vec<Element>>,
    #[serde(default)]
    pub close_conjugation: bool,
    #[serde(default)]
    pub all_subgroups: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub family: String,
    pub variance: Variance,
    #[serde(flatten)]
    pub kind: ModuleKind,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModuleKind {
    Trivial(bool),
    Zero(bool),
    /// `ℤ[−, Γ/Λ]` or `ℤ[Γ/Λ, −]` for the listed subgroup.
    Represented(Vec<Element>),
    /// Direct sum of represented modules.
    Free(Vec<Vec<Element>>),
    /// Explicit values and actions keyed by morphism id.
    Explicit {
        values: Vec<FpAbelianGroup>,
        actions: BTreeMap<String, IntMatrix>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub group: String,
    pub vertices: usize,
    /// Permutations of the vertices for some elements (typically generators).
    pub action: BTreeMap<Element, Vec<usize>>,
    pub simplices: Vec<Vec<usize>>,
    /// Add all faces of the listed simplices.
    #[serde(default)]
    pub close_faces: bool,
    /// Add all translates of the listed simplices.
    #[serde(default)]
    pub close_orbits: bool,
    /// Accept non-admissible actions and subdivide once.
    #[serde(default)]
    pub subdivide: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationSpec {
    pub complex: String,
    /// Each stage lists ids into the complex's `simplices` array; stages are
    /// closed under faces when the complex is.
    #[serde(default)]
    pub stages: Vec<Vec<usize>>,
    #[serde(default)]
    pub skeleta: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Defaults {
    pub family: Option<String>,
    pub module: Option<String>,
    pub complex: Option<String>,
    pub filtration: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default)]
    pub groups: BTreeMap<String, GroupSpec>,
    #[serde(default)]
    pub families: BTreeMap<String, FamilySpec>,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleSpec>,
    #[serde(default)]
    pub complexes: BTreeMap<String, ComplexSpec>,
    #[serde(default)]
    pub filtrations: BTreeMap<String, FiltrationSpec>,
    #[serde(default)]
    pub defaults: Defaults,
}

/// A loaded manifest with every object validated.
#[derive(Debug)]
pub struct Workspace {
    pub path: PathBuf,
    pub description: Option<String>,
    pub groups: BTreeMap<String, Arc<FiniteGroup>>,
    /// Family name to its orbit category (which owns the family).
    pub categories: BTreeMap<String, Arc<OrbitCategory>>,
    pub family_groups: BTreeMap<String, String>,
    pub modules: BTreeMap<String, BredonModule>,
    pub complexes: BTreeMap<String, GammaComplex>,
    pub complex_groups: BTreeMap<String, String>,
    pub filtrations: BTreeMap<String, Filtration>,
    pub filtration_complexes: BTreeMap<String, String>,
    pub defaults: Defaults,
}

impl Workspace {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ManifestError> {
        let path = path.as_ref().to_path_buf();
        let text = std::fs::read_to_string(&path).map_err(|source| ManifestError::Io {
            path: path.clone(),
            source,
        })?;
        Self::from_str(&text, path)
    }

    pub fn from_str(text: &str, path: PathBuf) -> Result<Self, ManifestError> {
        let manifest: Manifest = serde_json::from_str(text).map_err(|e| ManifestError::Parse {
            path: path.clone(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::from_manifest(manifest, path)
    }

    pub fn from_manifest(manifest: Manifest, path: PathBuf) -> Result<Self, ManifestError> {
        let invalid = |context: String, message: String| ManifestError::Validation {
            path: path.clone(),
            context,
            message,
        };
        let unresolved = |what: &'static str, name: &str| ManifestError::Unresolved {
            path: path.clone(),
            what,
            name: name.to_string(),
        };

        let mut groups = BTreeMap::new();
        for (name, spec) in &manifest.groups {
            let ctx = format!("groups.{name}");
            let g = match spec {
                GroupSpec::Table { order, table, labels } => {
                    if table.len() != *order {
                        return Err(invalid(ctx, format!("order {order} but the table has {} rows", table.len())));
                    }
                    FiniteGroup::from_table(table.clone(), labels.clone()).map_err(|e| invalid(ctx, e.to_string()))?
                }
                GroupSpec::Permutations { degree, generators } => FiniteGroup::from_permutations(*degree, generators)
                    .map_err(|e| invalid(ctx, e.to_string()))?
                    .0,
                GroupSpec::Cyclic { cyclic } => {
                    if *cyclic == 0 {
                        return Err(invalid(ctx, "cyclic group of order 0".into()));
                    }
                    FiniteGroup::cyclic(*cyclic)
                }
                GroupSpec::Symmetric { symmetric } => FiniteGroup::symmetric(*symmetric).0,
            };
            groups.insert(name.clone(), Arc::new(g));
        }

        let subgroup = |g: &FiniteGroup, elems: &[Element], ctx: &str| {
            g.subgroup(elems).map_err(|e| invalid(ctx.to_string(), e.to_string()))
        };

        let mut categories = BTreeMap::new();
        let mut family_groups = BTreeMap::new();
        for (name, spec) in &manifest.families {
            let ctx = format!("families.{name}");
            let g = groups.get(&spec.group).ok_or_else(|| unresolved("group", &spec.group))?;
            let family = if spec.all_subgroups {
                Family::all_subgroups(g)
            } else {
                let seeds = spec
                    .subgroups
                    .iter()
                    .map(|s| subgroup(g, s, &ctx))
                    .collect::<Result<Vec<Subgroup>, _>>()?;
                if spec.close_conjugation {
                    Family::close(g, &seeds)
                } else {
                    Family::from_members(g, &g.whole(), &seeds)
                }
                .map_err(|e| invalid(ctx.clone(), e.to_string()))?
            };
            categories.insert(name.clone(), Arc::new(OrbitCategory::build(g.clone(), family)));
            family_groups.insert(name.clone(), spec.group.clone());
        }

        let mut modules = BTreeMap::new();
        for (name, spec) in &manifest.modules {
            let ctx = format!("modules.{name}");
            let cat = categories.get(&spec.family).ok_or_else(|| unresolved("family", &spec.family))?;
            let object = |elems: &[Element]| -> Result<usize, ManifestError> {
                let h = subgroup(cat.group(), elems, &ctx)?;
                cat.object_of(&h)
                    .ok_or_else(|| invalid(ctx.clone(), format!("subgroup {elems:?} is not in the family")))
            };
            let m = match &spec.kind {
                ModuleKind::Trivial(_) => BredonModule::trivial(cat, spec.variance),
                ModuleKind::Zero(_) => BredonModule::zero(cat, spec.variance),
                ModuleKind::Represented(h) => BredonModule::represented(cat, spec.variance, object(h)?),
                ModuleKind::Free(hs) => {
                    let basis = hs.iter().map(|h| object(h)).collect::<Result<Vec<_>, _>>()?;
                    BredonModule::free(cat, spec.variance, basis)
                }
                ModuleKind::Explicit { values, actions } => {
                    let mut by_id = BTreeMap::new();
                    for (k, a) in actions {
                        let id: usize = k
                            .parse()
                            .map_err(|_| invalid(ctx.clone(), format!("action key `{k}` is not a morphism id")))?;
                        by_id.insert(id, a.clone());
                    }
                    if by_id.len() != cat.morphism_count() || by_id.keys().enumerate().any(|(i, &k)| i != k) {
                        return Err(invalid(
                            ctx,
                            format!("expected actions for morphism ids 0..{}", cat.morphism_count()),
                        ));
                    }
                    BredonModule::new(cat.clone(), spec.variance, values.clone(), by_id.into_values().collect())
                        .map_err(|e| invalid(ctx, e.to_string()))?
                }
            };
            modules.insert(name.clone(), m);
        }

        let mut complexes = BTreeMap::new();
        let mut complex_groups = BTreeMap::new();
        let mut listings: BTreeMap<String, Vec<Vec<usize>>> = BTreeMap::new();
        for (name, spec) in &manifest.complexes {
            let ctx = format!("complexes.{name}");
            let g = groups.get(&spec.group).ok_or_else(|| unresolved("group", &spec.group))?;
            let v = GammaSet::from_partial(g, spec.vertices, &spec.action).map_err(|e| invalid(ctx.clone(), e.to_string()))?;
            let mut simplices = spec.simplices.clone();
            if spec.close_orbits {
                let mut all = std::collections::BTreeSet::new();
                for s in &simplices {
                    for h in g.elements() {
                        let mut t: Vec<usize> = s.iter().map(|&x| v.act(h, x)).collect();
                        t.sort_unstable();
                        all.insert(t);
                    }
                }
                simplices = all.into_iter().collect();
            }
            if spec.close_faces {
                simplices = close_under_faces(&simplices);
            }
            let x = if spec.subdivide {
                GammaComplex::equivariant(g.clone(), v, simplices)
                    .map(|x| x.barycentric_subdivision())
            } else {
                GammaComplex::new(g.clone(), v, simplices)
            }
            .map_err(|e| invalid(ctx, e.to_string()))?;
            complexes.insert(name.clone(), x);
            complex_groups.insert(name.clone(), spec.group.clone());
            listings.insert(name.clone(), spec.simplices.clone());
        }

        let mut filtrations = BTreeMap::new();
        let mut filtration_complexes = BTreeMap::new();
        for (name, spec) in &manifest.filtrations {
            let ctx = format!("filtrations.{name}");
            let x = complexes.get(&spec.complex).ok_or_else(|| unresolved("complex", &spec.complex))?;
            let cspec = &manifest.complexes[&spec.complex];
            let f = if spec.skeleta {
                Filtration::skeleta(x.clone())
            } else {
                if cspec.subdivide || cspec.close_orbits {
                    return Err(invalid(ctx, "explicit stages need a complex without closure under orbits or subdivision".into()));
                }
                let listing = &listings[&spec.complex];
                let mut stages = Vec::with_capacity(spec.stages.len());
                for (i, ids) in spec.stages.iter().enumerate() {
                    let mut s = Vec::with_capacity(ids.len());
                    for &id in ids {
                        let simplex = listing
                            .get(id)
                            .ok_or_else(|| invalid(ctx.clone(), format!("stage {i}: simplex id {id} out of range")))?;
                        s.push(simplex.clone());
                    }
                    stages.push(if cspec.close_faces { close_under_faces(&s) } else { s });
                }
                Filtration::new(x.clone(), stages).map_err(|e| invalid(ctx, e.to_string()))?
            };
            filtrations.insert(name.clone(), f);
            filtration_complexes.insert(name.clone(), spec.complex.clone());
        }

        let ws = Workspace {
            path: path.clone(),
            description: manifest.description,
            groups,
            categories,
            family_groups,
            modules,
            complexes,
            complex_groups,
            filtrations,
            filtration_complexes,
            defaults: manifest.defaults,
        };
        for (what, name) in [
            ("family", &ws.defaults.family),
            ("module", &ws.defaults.module),
            ("complex", &ws.defaults.complex),
            ("filtration", &ws.defaults.filtration),
        ] {
            if let Some(n) = name {
                let known = match what {
                    "family" => ws.categories.contains_key(n),
                    "module" => ws.modules.contains_key(n),
                    "complex" => ws.complexes.contains_key(n),
                    _ => ws.filtrations.contains_key(n),
                };
                if !known {
                    return Err(unresolved(what, n));
                }
            }
        }
        Ok(ws)
    }

    fn pick<'a, T>(
        &self,
        map: &'a BTreeMap<String, T>,
        what: &'static str,
        requested: Option<&str>,
        default: &Option<String>,
    ) -> Result<(&'a str, &'a T), ManifestError> {
        let name = requested.map(str::to_string).or_else(|| default.clone());
        match name {
            Some(n) => map
                .get_key_value(&n)
                .map(|(k, v)| (k.as_str(), v))
                .ok_or_else(|| ManifestError::Unresolved {
                    path: self.path.clone(),
                    what,
                    name: n,
                }),
            None if map.len() == 1 => {
                let (k, v) = map.iter().next().expect("one entry");
                Ok((k.as_str(), v))
            }
            None => Err(ManifestError::Ambiguous {
                path: self.path.clone(),
                what,
                count: map.len(),
            }),
        }
    }

    /// The requested family, else the default, else the only one.
    pub fn category(&self, name: Option<&str>) -> Result<(&str, &Arc<OrbitCategory>), ManifestError> {
        self.pick(&self.categories, "family", name, &self.defaults.family)
    }

    pub fn module(&self, name: &str) -> Result<&BredonModule, ManifestError> {
        self.pick(&self.modules, "module", Some(name), &None).map(|(_, m)| m)
    }

    pub fn default_module(&self) -> Option<&BredonModule> {
        self.defaults.module.as_ref().and_then(|n| self.modules.get(n))
    }

    pub fn complex(&self, name: Option<&str>) -> Result<(&str, &GammaComplex), ManifestError> {
        self.pick(&self.complexes, "complex", name, &self.defaults.complex)
    }

    pub fn filtration(&self, name: Option<&str>) -> Result<(&str, &Filtration), ManifestError> {
        self.pick(&self.filtrations, "filtration", name, &self.defaults.filtration)
    }

    /// Families defined over the group of the given complex.
    pub fn families_for_complex(&self, complex: &str) -> Vec<&str> {
        let g = &self.complex_groups[complex];
        self.family_groups
            .iter()
            .filter(|(_, fg)| *fg == g)
            .map(|(f, _)| f.as_str())
            .collect()
    }
}
