//! JSON fan files: `{"rank", "torsion", "B", "cones"}` with 1-based cones.

use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use toricdm::{IntMatrix, StackyFan};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanFile {
    pub rank: usize,
    #[serde(default)]
    pub torsion: Vec<i64>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
}

pub fn parse(text: &str, origin: &str) -> Result<FanFile, String> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        format!("{origin}: line {}, column {}, field `{path}`: {inner}", inner.line(), inner.column())
    })
}

pub fn load(path: &Path) -> Result<FanFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse(&text, &path.display().to_string())
}

impl FanFile {
    /// The fan without validation, so that `validate` can list violations.
    pub fn to_fan_unchecked(&self) -> Result<StackyFan, String> {
        let rows = self.rank + self.torsion.len();
        if self.b.len() != rows {
            return Err(format!("B has {} rows, expected rank + torsion length = {rows}", self.b.len()));
        }
        let s = self.b.first().map_or(0, Vec::len);
        if let Some(i) = self.b.iter().position(|r| r.len() != s) {
            return Err(format!("row {} of B has {} entries, expected {s}", i + 1, self.b[i].len()));
        }
        let mut cones = Vec::with_capacity(self.cones.len());
        for c in &self.cones {
            let mut cone = Vec::with_capacity(c.len());
            for &i in c {
                if i == 0 || i > s {
                    return Err(format!("cone index {i} out of range 1..={s}"));
                }
                cone.push(i - 1);
            }
            cones.push(cone);
        }
        let b = IntMatrix::from_rows_with_cols(
            self.b.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
            s,
        );
        let torsion = self.torsion.iter().map(|&x| BigInt::from(x)).collect();
        Ok(StackyFan::from_parts(self.rank, torsion, b, cones))
    }

    pub fn from_fan(fan: &StackyFan) -> Result<FanFile, String> {
        let small = |x: &BigInt| i64::try_from(x).map_err(|_| format!("entry {x} does not fit in 64 bits"));
        Ok(FanFile {
            rank: fan.n(),
            torsion: fan.torsion().iter().map(small).collect::<Result<_, _>>()?,
            b: fan.b().to_rows().iter().map(|r| r.iter().map(small).collect()).collect::<Result<_, _>>()?,
            cones: fan.cones().iter().map(|c| c.iter().map(|i| i + 1).collect()).collect(),
        })
    }
}
