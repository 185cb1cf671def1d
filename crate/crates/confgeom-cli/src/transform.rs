//! `boost:d1,d2,d3,d4,rapidity` and `rotation:i,j,angle` map specs.

use confgeom::mink5::LorentzMap;

use crate::error::{CliError, Result};

fn numbers(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| CliError::Config(format!("bad number '{t}' in transform"))))
        .collect()
}

/// Parses a Lorentz map spec. A boost direction is normalized, so
/// `boost:1,0,0,0,0.5` and `boost:2,0,0,0,0.5` agree.
pub fn parse_transform(spec: &str) -> Result<LorentzMap> {
    let (kind, rest) =
        spec.split_once(':').ok_or_else(|| CliError::Config(format!("transform '{spec}' needs the form kind:args")))?;
    let v = numbers(rest)?;
    match kind.trim() {
        "boost" => {
            if v.len() != 5 {
                return Err(CliError::Config("boost takes four direction components and a rapidity".into()));
            }
            let n = v[..4].iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(n > 0.0) {
                return Err(CliError::Config("boost direction must be nonzero".into()));
            }
            let dir = [v[0] / n, v[1] / n, v[2] / n, v[3] / n];
            Ok(LorentzMap::boost(dir, v[4])?)
        }
        "rotation" => {
            if v.len() != 3 || v[0].fract() != 0.0 || v[1].fract() != 0.0 || v[0] < 0.0 || v[1] < 0.0 {
                return Err(CliError::Config("rotation takes two integer axes and an angle".into()));
            }
            Ok(LorentzMap::rotation(v[0] as usize, v[1] as usize, v[2])?)
        }
        other => Err(CliError::Config(format!("unknown transform kind '{other}'"))),
    }
}

/// Composes `;`-separated specs, applied right to left.
pub fn parse_chain(spec: &str) -> Result<LorentzMap> {
    let mut out = LorentzMap::identity();
    for part in spec.split(';').filter(|p| !p.trim().is_empty()) {
        out = out.compose(&parse_transform(part)?);
    }
    Ok(out)
}
