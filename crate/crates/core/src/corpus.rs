//! Bundled description files, embedded at compile time.
//!
//! The files are produced by [`generate`]; a test keeps them in sync.

use std::path::Path;

use crate::algebra::builtins::{cyclic_group_algebra, field_extension, matrix_algebra, truncated_power, upper_triangular};
use crate::endo::split::OmegaSystem;
use crate::error::Result;
use crate::field::FiniteField;
use crate::format::{self, TowerSource};
use crate::matrix::{BaseRing, WindowedMatrix};
use crate::module::perfect::truncated_chain_family;
use crate::module::{FiniteModule, Side};
use crate::tower::builtin_tower;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorpusKind {
    Algebra,
    Module,
    Tower,
    Family,
    System,
    Windowed,
}

#[derive(Clone, Copy, Debug)]
pub struct CorpusFile {
    pub name: &'static str,
    pub kind: CorpusKind,
    /// Expected top-level verdict, where there is one.
    pub expect: Option<&'static str>,
    pub text: &'static str,
}

macro_rules! entry {
    ($name:literal, $kind:ident, $expect:expr) => {
        CorpusFile {
            name: $name,
            kind: CorpusKind::$kind,
            expect: $expect,
            text: include_str!(concat!("../corpus/", $name)),
        }
    };
}

pub const CORPUS: &[CorpusFile] = &[
    entry!("group-f2-c3.toml", Algebra, Some("SEMISIMPLE")),
    entry!("t2-f2.toml", Algebra, Some("NOT_SEMISIMPLE")),
    entry!("dual-numbers-f2.toml", Algebra, Some("NOT_SEMISIMPLE")),
    entry!("mat2-f2.toml", Algebra, Some("SEMISIMPLE")),
    entry!("f4.toml", Algebra, Some("SEMISIMPLE")),
    entry!("module-t2-regular.toml", Module, Some("PERFECT")),
    entry!("module-dual-regular.toml", Module, Some("PERFECT")),
    entry!("tower-adic2.toml", Tower, Some("PERFECT")),
    entry!("tower-triangular.toml", Tower, Some("PERFECT")),
    entry!("tower-semisimple.toml", Tower, Some("PERFECT")),
    entry!("family-chain6.toml", Family, Some("NOT_PERFECT")),
    entry!("family-chain7.toml", Family, Some("NOT_PERFECT")),
    entry!("system-chain6.toml", System, Some("NOT_SPLIT")),
    entry!("system-group.toml", System, Some("SPLIT")),
    entry!("windowed-shift.toml", Windowed, None),
];

pub fn find(name: &str) -> Option<&'static CorpusFile> {
    CORPUS.iter().find(|c| c.name == name)
}

/// Directory the corpus files are read relative to.
pub fn dir() -> &'static Path {
    Path::new(".")
}

/// The canonical text of every corpus file, by name.
pub fn generate() -> Result<Vec<(&'static str, String)>> {
    let f2 = FiniteField::prime(2)?;
    let regular = |a| FiniteModule::regular(std::sync::Arc::new(a), Side::Right);
    let shift_base = TowerSource::Builtin { builtin: "adic2".into(), depth: 3 };
    let base = BaseRing::new(format::load_tower(&shift_base, dir())?);
    Ok(vec![
        ("group-f2-c3.toml", format::write_algebra(&cyclic_group_algebra(&f2, 3))?),
        ("t2-f2.toml", format::write_algebra(&upper_triangular(&f2, 2))?),
        ("dual-numbers-f2.toml", format::write_algebra(&truncated_power(&f2, 2))?),
        ("mat2-f2.toml", format::write_algebra(&matrix_algebra(&f2, 2))?),
        ("f4.toml", format::write_algebra(&field_extension(&f2, 2)?)?),
        ("module-t2-regular.toml", format::write_module(&regular(upper_triangular(&f2, 2)))?),
        ("module-dual-regular.toml", format::write_module(&regular(truncated_power(&f2, 2)))?),
        ("tower-adic2.toml", format::write_tower(&builtin_tower("adic2", 4)?)?),
        ("tower-triangular.toml", format::write_tower(&builtin_tower("triangular", 3)?)?),
        ("tower-semisimple.toml", format::write_tower(&builtin_tower("semisimple", 3)?)?),
        ("family-chain6.toml", format::write_family(&truncated_chain_family(2, 6)?)?),
        ("family-chain7.toml", format::write_family(&truncated_chain_family(2, 7)?)?),
        ("system-chain6.toml", format::write_system(&OmegaSystem::chain(2, 6)?)?),
        ("system-group.toml", format::write_system(&OmegaSystem::group_algebra_example(4)?)?),
        ("windowed-shift.toml", format::write_windowed(&WindowedMatrix::shift(&base, 5), shift_base)?),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `TOPORING_WRITE_CORPUS=1 cargo test -p toporing corpus::tests::write -- --ignored`
    #[test]
    #[ignore]
    fn write() {
        if std::env::var("TOPORING_WRITE_CORPUS").is_err() {
            return;
        }
        let out = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
        std::fs::create_dir_all(&out).unwrap();
        for (name, text) in generate().unwrap() {
            std::fs::write(out.join(name), text).unwrap();
        }
    }

    #[test]
    fn bundled_files_are_current() {
        let generated = generate().unwrap();
        assert_eq!(generated.len(), CORPUS.len());
        for (name, text) in generated {
            let c = find(name).unwrap_or_else(|| panic!("{name} is not registered"));
            assert_eq!(c.text, text, "{name} is stale");
        }
    }
}
