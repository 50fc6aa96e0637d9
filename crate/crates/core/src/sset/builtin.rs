use std::sync::Arc;

use super::{product, FiniteSimplicialSet, FormalSimplex};
use crate::error::{Error, Result};

const NAMES: [&str; 6] = ["point", "sphere1", "sphere2", "rp2", "torus", "s0"];

pub fn builtin_names() -> &'static [&'static str] {
    &NAMES
}

/// Builds a set whose faces are all nondegenerate, from `(name, faces)` per
/// dimension.
fn from_table(table: &[&[(&str, &[&str])]]) -> FiniteSimplicialSet {
    let names: Vec<Vec<String>> = table.iter().map(|cells| cells.iter().map(|(n, _)| n.to_string()).collect()).collect();
    let faces = table
        .iter()
        .enumerate()
        .map(|(n, cells)| {
            cells
                .iter()
                .map(|(_, fs)| {
                    fs.iter()
                        .map(|f| {
                            let c = names[n - 1].iter().position(|x| x == f).expect("face names a cell");
                            FormalSimplex::nondegenerate(n - 1, c)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    FiniteSimplicialSet::new(names, faces, true).expect("builtin table is well formed")
}

/// The standard corpus: `point`, `sphere1` (boundary of the 2-simplex),
/// `sphere2` (boundary of the 3-simplex), `rp2` (two vertices, three edges, two
/// triangles), `torus` (`sphere1 × sphere1`) and `s0` (two points).
pub fn builtin(name: &str) -> Result<FiniteSimplicialSet> {
    Ok(match name {
        "point" => from_table(&[&[("v", &[])]]),
        "s0" => from_table(&[&[("a", &[]), ("b", &[])]]),
        "sphere1" => from_table(&[
            &[("0", &[]), ("1", &[]), ("2", &[])],
            &[("01", &["1", "0"]), ("02", &["2", "0"]), ("12", &["2", "1"])],
        ]),
        "sphere2" => from_table(&[
            &[("0", &[]), ("1", &[]), ("2", &[]), ("3", &[])],
            &[
                ("01", &["1", "0"]),
                ("02", &["2", "0"]),
                ("03", &["3", "0"]),
                ("12", &["2", "1"]),
                ("13", &["3", "1"]),
                ("23", &["3", "2"]),
            ],
            &[
                ("012", &["12", "02", "01"]),
                ("013", &["13", "03", "01"]),
                ("023", &["23", "03", "02"]),
                ("123", &["23", "13", "12"]),
            ],
        ]),
        "rp2" => from_table(&[
            &[("v", &[]), ("w", &[])],
            &[("a", &["v", "v"]), ("b", &["v", "v"]), ("c", &["v", "w"])],
            &[("U", &["a", "b", "a"]), ("L", &["b", "c", "c"])],
        ]),
        "torus" => {
            let s = Arc::new(builtin("sphere1")?);
            let t = product(&s, &s, 2)?;
            Arc::try_unwrap(t.set).unwrap_or_else(|a| (*a).clone())
        }
        _ => {
            return Err(Error::InvalidInput(format!("unknown builtin space `{name}`; known: {}", NAMES.join(", "))));
        }
    })
}
