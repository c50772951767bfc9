//! TOML description files for algebras, modules, towers, families, systems and
//! windowed matrices. Field elements are integer codes `Σ c_t·p^t` in the
//! power basis of the field's modulus.
//!
//! Writers emit structure constants and sparse entries in lexicographic
//! order, so write → read → write is the identity on text.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::builtins::{cyclic_group_algebra, field_extension, matrix_algebra, truncated_power, upper_triangular};
use crate::algebra::Algebra;
use crate::endo::split::{Ground, OmegaSystem, Tail};
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::linalg::Matrix;
use crate::matrix::{BaseRing, IndexSet, Row, WindowedMatrix};
use crate::module::perfect::{FamilyKind, ModuleFamily};
use crate::module::{FiniteModule, Side};
use crate::tower::{builtin_tower, RingTower, TowerIntent};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub d: u32,
    /// Monic modulus, coefficients from low to high degree.
    pub modulus: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub field: FieldSpec,
    pub dim: usize,
    pub unit: Vec<u32>,
    /// `[i, j, k, c]`: the coefficient of `e_k` in `e_i·e_j`.
    pub triples: Vec<[u64; 4]>,
}

/// An algebra given inline, by file, or by built-in name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraSource {
    File { file: String },
    Builtin { builtin: String },
    Inline(AlgebraSpec),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    /// `[row, col, value]`, nonzero entries only.
    pub entries: Vec<[u64; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub side: Side,
    pub dim: usize,
    pub algebra: AlgebraSource,
    /// One matrix per algebra basis element.
    pub action: Vec<SparseMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub name: String,
    pub intent: TowerIntent,
    pub levels: Vec<AlgebraSource>,
    /// `transitions[n]: R_{n+1} → R_n`.
    pub transitions: Vec<SparseMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMap {
    pub from: usize,
    pub to: usize,
    pub matrix: SparseMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub labels: Vec<String>,
    pub members: Vec<ModuleSpec>,
    #[serde(default)]
    pub maps: Vec<FamilyMap>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub ground: Ground,
    pub tail: Tail,
    pub modules: Vec<ModuleSpec>,
    pub maps: Vec<SparseMatrix>,
}

/// A tower by built-in name and depth, or inline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TowerSource {
    Builtin { builtin: String, depth: usize },
    Inline(TowerSpec),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntrySpec {
    pub col: usize,
    pub value: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowSpec {
    pub row: usize,
    /// Entries outside `entries` lie in `K_precision`.
    pub precision: usize,
    pub entries: Vec<EntrySpec>,
}

/// Rows absent from `rows` are unknown.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowedSpec {
    pub base: TowerSource,
    pub index: IndexSet,
    pub window: usize,
    pub rows: Vec<RowSpec>,
}

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

pub fn from_toml<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(parse_err)
}

pub fn to_toml<T: Serialize>(value: &T) -> Result<String> {
    toml::to_string(value).map_err(parse_err)
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn resolve(dir: &Path, file: &str) -> PathBuf {
    let p = Path::new(file);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        dir.join(p)
    }
}

fn code(v: u64, f: &FiniteField) -> Result<u32> {
    if v >= f.q() as u64 {
        return Err(Error::Parse(format!("field element {v} is outside F_{}", f.q())));
    }
    Ok(v as u32)
}

// ---------------------------------------------------------------- fields

pub fn field_spec(f: &FiniteField) -> FieldSpec {
    FieldSpec { p: f.p(), d: f.d(), modulus: f.modulus().to_vec() }
}

pub fn field_from_spec(s: &FieldSpec) -> Result<FiniteField> {
    if s.modulus.len() != s.d as usize + 1 {
        return Err(Error::Parse(format!("a modulus of degree {} needs {} coefficients", s.d, s.d + 1)));
    }
    FiniteField::with_modulus(s.p, &s.modulus)
}

// ---------------------------------------------------------------- algebras

pub fn algebra_spec(a: &Algebra) -> AlgebraSpec {
    AlgebraSpec {
        field: field_spec(a.field()),
        dim: a.dim(),
        unit: a.unit().to_vec(),
        triples: a.triples().into_iter().map(|(i, j, k, c)| [i as u64, j as u64, k as u64, c as u64]).collect(),
    }
}

pub fn algebra_from_spec(s: &AlgebraSpec) -> Result<Algebra> {
    let f = field_from_spec(&s.field)?;
    let mut triples = Vec::with_capacity(s.triples.len());
    for t in &s.triples {
        triples.push((t[0] as usize, t[1] as usize, t[2] as usize, code(t[3], &f)?));
    }
    for &u in &s.unit {
        code(u as u64, &f)?;
    }
    crate::linalg::check_dims("unit length", s.unit.len(), s.dim)?;
    Algebra::from_triples(f, s.dim, &triples, s.unit.clone())
}

pub fn write_algebra(a: &Algebra) -> Result<String> {
    to_toml(&algebra_spec(a))
}

pub fn read_algebra(text: &str) -> Result<Algebra> {
    algebra_from_spec(&from_toml(text)?)
}

/// `F<q>`, `trunc:<p>:<n>`, `mat:<p>:<n>`, `tri:<p>:<n>`, `group:<p>:<m>`,
/// `ext:<p>:<k>`.
pub fn builtin_algebra(name: &str) -> Result<Algebra> {
    let parts: Vec<&str> = name.split(':').collect();
    let num = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad number '{s}' in '{name}'")));
    match parts.as_slice() {
        [kind, p, n] => {
            let f = FiniteField::prime(num(p)? as u32)?;
            let n = num(n)?;
            if n == 0 {
                return Err(Error::Parse(format!("'{name}' needs a positive size")));
            }
            match *kind {
                "trunc" => Ok(truncated_power(&f, n)),
                "mat" => Ok(matrix_algebra(&f, n)),
                "tri" => Ok(upper_triangular(&f, n)),
                "group" => Ok(cyclic_group_algebra(&f, n)),
                "ext" => field_extension(&f, n),
                _ => Err(Error::Parse(format!("unknown built-in algebra '{name}'"))),
            }
        }
        [one] if one.starts_with('F') => {
            let q = num(&one[1..])?;
            let (p, d) = prime_power(q).ok_or_else(|| Error::Parse(format!("{q} is not a prime power")))?;
            field_extension(&FiniteField::prime(p)?, d)
        }
        _ => Err(Error::Parse(format!("unknown built-in algebra '{name}'"))),
    }
}

fn prime_power(q: usize) -> Option<(u32, usize)> {
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut r, mut d) = (q, 0);
    while r % p == 0 {
        r /= p;
        d += 1;
    }
    (r == 1).then_some((p as u32, d))
}

pub fn load_algebra(src: &AlgebraSource, dir: &Path) -> Result<Algebra> {
    match src {
        AlgebraSource::Inline(s) => algebra_from_spec(s),
        AlgebraSource::Builtin { builtin } => builtin_algebra(builtin),
        AlgebraSource::File { file } => read_algebra(&read_file(&resolve(dir, file))?),
    }
}

// ---------------------------------------------------------------- matrices

pub fn sparse(m: &Matrix) -> SparseMatrix {
    let mut entries = Vec::new();
    for r in 0..m.rows {
        for c in 0..m.cols {
            let v = m.get(r, c);
            if v != 0 {
                entries.push([r as u64, c as u64, v as u64]);
            }
        }
    }
    SparseMatrix { rows: m.rows, cols: m.cols, entries }
}

pub fn dense(s: &SparseMatrix, f: &FiniteField) -> Result<Matrix> {
    let mut m = Matrix::zeros(s.rows, s.cols);
    for e in &s.entries {
        let (r, c) = (e[0] as usize, e[1] as usize);
        if r >= s.rows || c >= s.cols {
            return Err(Error::Parse(format!("entry ({r}, {c}) outside a {}×{} matrix", s.rows, s.cols)));
        }
        m.set(r, c, f.add(m.get(r, c), code(e[2], f)?));
    }
    Ok(m)
}

// ---------------------------------------------------------------- modules

pub fn module_spec(m: &FiniteModule) -> ModuleSpec {
    ModuleSpec {
        side: m.side,
        dim: m.dim,
        algebra: AlgebraSource::Inline(algebra_spec(&m.algebra)),
        action: m.action.iter().map(sparse).collect(),
    }
}

pub fn module_from_spec(s: &ModuleSpec, dir: &Path) -> Result<FiniteModule> {
    let a = Arc::new(load_algebra(&s.algebra, dir)?);
    module_over(s, a)
}

fn module_over(s: &ModuleSpec, a: Arc<Algebra>) -> Result<FiniteModule> {
    let f = a.field().clone();
    let action = s.action.iter().map(|x| dense(x, &f)).collect::<Result<Vec<_>>>()?;
    FiniteModule::new(a, s.side, s.dim, action)
}

/// Modules sharing one algebra description share one `Arc`.
fn modules_from_specs(specs: &[ModuleSpec], dir: &Path) -> Result<Vec<FiniteModule>> {
    let mut cache: Vec<(AlgebraSource, Arc<Algebra>)> = Vec::new();
    specs
        .iter()
        .map(|s| {
            let a = match cache.iter().find(|(src, _)| *src == s.algebra) {
                Some((_, a)) => a.clone(),
                None => {
                    let a = Arc::new(load_algebra(&s.algebra, dir)?);
                    cache.push((s.algebra.clone(), a.clone()));
                    a
                }
            };
            module_over(s, a)
        })
        .collect()
}

pub fn write_module(m: &FiniteModule) -> Result<String> {
    to_toml(&module_spec(m))
}

pub fn read_module(text: &str, dir: &Path) -> Result<FiniteModule> {
    module_from_spec(&from_toml(text)?, dir)
}

// ---------------------------------------------------------------- towers

pub fn tower_spec(t: &RingTower) -> TowerSpec {
    TowerSpec {
        name: t.name.clone(),
        intent: t.intent,
        levels: t.levels.iter().map(|a| AlgebraSource::Inline(algebra_spec(a))).collect(),
        transitions: t.transitions.iter().map(sparse).collect(),
    }
}

pub fn tower_from_spec(s: &TowerSpec, dir: &Path) -> Result<RingTower> {
    let levels = s.levels.iter().map(|l| load_algebra(l, dir)).collect::<Result<Vec<_>>>()?;
    let f = levels.first().ok_or_else(|| Error::Tower("a tower needs at least one level".into()))?.field().clone();
    let transitions = s.transitions.iter().map(|x| dense(x, &f)).collect::<Result<Vec<_>>>()?;
    RingTower::new(&s.name, levels, transitions, s.intent)
}

pub fn write_tower(t: &RingTower) -> Result<String> {
    to_toml(&tower_spec(t))
}

pub fn read_tower(text: &str, dir: &Path) -> Result<RingTower> {
    tower_from_spec(&from_toml(text)?, dir)
}

pub fn load_tower(src: &TowerSource, dir: &Path) -> Result<RingTower> {
    match src {
        TowerSource::Builtin { builtin, depth } => builtin_tower(builtin, *depth),
        TowerSource::Inline(s) => tower_from_spec(s, dir),
    }
}

// ---------------------------------------------------------------- families and systems

pub fn family_spec(fam: &ModuleFamily) -> FamilySpec {
    FamilySpec {
        kind: fam.kind,
        labels: fam.labels.clone(),
        members: fam.members.iter().map(module_spec).collect(),
        maps: fam.maps.iter().map(|(i, j, x)| FamilyMap { from: *i, to: *j, matrix: sparse(x) }).collect(),
    }
}

pub fn family_from_spec(s: &FamilySpec, dir: &Path) -> Result<ModuleFamily> {
    let members = modules_from_specs(&s.members, dir)?;
    if s.labels.len() != members.len() {
        return Err(Error::Parse(format!("{} labels for {} members", s.labels.len(), members.len())));
    }
    let mut maps = Vec::new();
    for m in &s.maps {
        if m.from >= members.len() || m.to >= members.len() {
            return Err(Error::Parse(format!("map {} → {} refers to a missing member", m.from, m.to)));
        }
        let x = dense(&m.matrix, members[m.from].field())?;
        if x.rows != members[m.from].dim || x.cols != members[m.to].dim {
            return Err(Error::Module(format!("map {} → {} has the wrong shape", m.from, m.to)));
        }
        maps.push((m.from, m.to, x));
    }
    Ok(ModuleFamily { kind: s.kind, labels: s.labels.clone(), members, maps })
}

pub fn write_family(fam: &ModuleFamily) -> Result<String> {
    to_toml(&family_spec(fam))
}

pub fn read_family(text: &str, dir: &Path) -> Result<ModuleFamily> {
    family_from_spec(&from_toml(text)?, dir)
}

pub fn system_spec(s: &OmegaSystem) -> SystemSpec {
    SystemSpec {
        ground: s.ground,
        tail: s.tail,
        modules: s.modules.iter().map(module_spec).collect(),
        maps: s.maps.iter().map(sparse).collect(),
    }
}

pub fn system_from_spec(s: &SystemSpec, dir: &Path) -> Result<OmegaSystem> {
    let modules = modules_from_specs(&s.modules, dir)?;
    let f = modules.first().ok_or_else(|| Error::Module("a system needs at least one module".into()))?.field().clone();
    let maps = s.maps.iter().map(|x| dense(x, &f)).collect::<Result<Vec<_>>>()?;
    OmegaSystem::new(s.ground, modules, maps, s.tail)
}

pub fn write_system(s: &OmegaSystem) -> Result<String> {
    to_toml(&system_spec(s))
}

pub fn read_system(text: &str, dir: &Path) -> Result<OmegaSystem> {
    system_from_spec(&from_toml(text)?, dir)
}

// ---------------------------------------------------------------- windowed matrices

pub fn windowed_spec(a: &WindowedMatrix, base: TowerSource) -> WindowedSpec {
    let rows = a
        .rows
        .iter()
        .enumerate()
        .filter_map(|(x, r)| {
            r.as_ref().map(|r| RowSpec {
                row: x,
                precision: r.precision,
                entries: r
                    .entries
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| !crate::linalg::is_zero_vec(e))
                    .map(|(c, e)| EntrySpec { col: c, value: e.clone() })
                    .collect(),
            })
        })
        .collect();
    WindowedSpec { base, index: a.index, window: a.window(), rows }
}

pub fn windowed_from_spec(s: &WindowedSpec, base: &Arc<BaseRing>) -> Result<WindowedMatrix> {
    if let IndexSet::Finite(n) = s.index {
        if s.window != n {
            return Err(Error::Window(format!("finite index set of size {n} needs window {n}")));
        }
    }
    let dim = base.ring().dim();
    let f = base.ring().field().clone();
    let mut rows: Vec<Option<Row>> = vec![None; s.window];
    for r in &s.rows {
        if r.row >= s.window {
            return Err(Error::Window(format!("row {} is outside the window {}", r.row, s.window)));
        }
        if r.precision > base.top() {
            return Err(Error::Window(format!("row {} claims precision {} above the top level", r.row, r.precision)));
        }
        let width = r.entries.iter().map(|e| e.col + 1).max().unwrap_or(0);
        let mut entries = vec![vec![0; dim]; width];
        for e in &r.entries {
            crate::linalg::check_dims("entry length", e.value.len(), dim)?;
            for &c in &e.value {
                code(c as u64, &f)?;
            }
            entries[e.col] = e.value.clone();
        }
        rows[r.row] = Some(Row { entries, precision: r.precision }.normalize(base));
    }
    Ok(WindowedMatrix { base: base.clone(), index: s.index, rows })
}

pub fn write_windowed(a: &WindowedMatrix, base: TowerSource) -> Result<String> {
    to_toml(&windowed_spec(a, base))
}

/// Reads a windowed matrix together with its base ring.
pub fn read_windowed(text: &str, dir: &Path) -> Result<WindowedMatrix> {
    let s: WindowedSpec = from_toml(text)?;
    let base = BaseRing::new(load_tower(&s.base, dir)?);
    windowed_from_spec(&s, &base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::perfect::truncated_chain_family;
    use crate::tower::adic_tower;

    #[test]
    fn algebra_round_trip_is_bit_exact() {
        for name in ["trunc:2:3", "mat:3:2", "tri:2:2", "group:2:3", "F4", "F9"] {
            let a = builtin_algebra(name).unwrap();
            let text = write_algebra(&a).unwrap();
            let b = read_algebra(&text).unwrap();
            assert!(a == b, "{name}");
            assert_eq!(write_algebra(&b).unwrap(), text, "{name}");
        }
    }

    #[test]
    fn tower_family_system_round_trips() {
        let t = adic_tower(2, 3).unwrap();
        let text = write_tower(&t).unwrap();
        assert_eq!(write_tower(&read_tower(&text, Path::new(".")).unwrap()).unwrap(), text);
        let fam = truncated_chain_family(2, 3).unwrap();
        let text = write_family(&fam).unwrap();
        assert_eq!(write_family(&read_family(&text, Path::new(".")).unwrap()).unwrap(), text);
        let s = OmegaSystem::chain(2, 3).unwrap();
        let text = write_system(&s).unwrap();
        assert_eq!(write_system(&read_system(&text, Path::new(".")).unwrap()).unwrap(), text);
    }

    #[test]
    fn windowed_round_trip() {
        let src = TowerSource::Builtin { builtin: "adic2".into(), depth: 3 };
        let base = BaseRing::new(load_tower(&src, Path::new(".")).unwrap());
        let s = WindowedMatrix::shift(&base, 4);
        let text = write_windowed(&s, src.clone()).unwrap();
        let back = read_windowed(&text, Path::new(".")).unwrap();
        assert_eq!(write_windowed(&back, src).unwrap(), text);
    }

    #[test]
    fn malformed_input_is_a_parse_error() {
        assert!(matches!(read_algebra("dim = ["), Err(Error::Parse(_))));
        let bad = "dim = 1\nunit = [1]\ntriples = [[0, 0, 0, 7]]\n[field]\np = 2\nd = 1\nmodulus = [0, 1]\n";
        assert!(matches!(read_algebra(bad), Err(Error::Parse(_))));
    }
}
