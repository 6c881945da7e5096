//! Shape specifications on the command line: a builtin name followed by its
//! numeric parameters, or a path to a shape JSON file.

use std::path::Path;

use spectral_shape::families::{octagon, Family};
use spectral_shape::polygon::Vec2;
use spectral_shape::support::SupportFunction;
use spectral_shape::Error;

pub const USAGE: &str = "disk [r] | square [side] | rectangle a b | reuleaux [width] | \
    disk-square theta | hull-disk-points[:n] d | hull-square-points d | octagon s t | <file.json>";

fn numbers(name: &str, args: &[String], min: usize, max: usize) -> Result<Vec<f64>, Error> {
    if args.len() < min || args.len() > max {
        return Err(Error::InvalidShape(format!("{name}: expected {min} to {max} numbers, got {}", args.len())));
    }
    args.iter()
        .map(|a| a.parse::<f64>().map_err(|_| Error::InvalidShape(format!("{name}: {a:?} is not a number"))))
        .collect()
}

/// Parses `spec` (name and parameters) into a support function.
pub fn parse(spec: &[String]) -> Result<SupportFunction, Error> {
    let Some((name, rest)) = spec.split_first() else {
        return Err(Error::InvalidShape(format!("missing shape; expected {USAGE}")));
    };
    match name.as_str() {
        "disk" => {
            let r = numbers(name, rest, 0, 1)?.first().copied().unwrap_or(1.0);
            SupportFunction::disk(r, Vec2::zeros())
        }
        "square" => {
            let side = numbers(name, rest, 0, 1)?.first().copied().unwrap_or(1.0);
            SupportFunction::square(side / 2.0)
        }
        "rectangle" => {
            let v = numbers(name, rest, 2, 2)?;
            SupportFunction::rectangle(-v[0] / 2.0, -v[1] / 2.0, v[0] / 2.0, v[1] / 2.0)
        }
        "reuleaux" => {
            let w = numbers(name, rest, 0, 1)?.first().copied().unwrap_or(1.0);
            SupportFunction::reuleaux(w)
        }
        "octagon" => {
            let v = numbers(name, rest, 2, 2)?;
            octagon(v[0], v[1])
        }
        n if n.ends_with(".json") || Path::new(n).is_file() => {
            if !rest.is_empty() {
                return Err(Error::InvalidShape("a shape file takes no parameters".into()));
            }
            let text = std::fs::read_to_string(n).map_err(|e| Error::InvalidShape(format!("{n}: {e}")))?;
            SupportFunction::from_json(&text)
        }
        n => match n.parse::<Family>() {
            Ok(family) => {
                let v = numbers(name, rest, 1, 1)?;
                family.shape(v[0])
            }
            Err(_) => Err(Error::InvalidShape(format!("unknown shape {n:?}; expected {USAGE}"))),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn builtins() {
        assert!((parse(&spec("disk")).unwrap().diameter() - 2.0).abs() < 1e-9);
        assert!((parse(&spec("square")).unwrap().min_width() - 1.0).abs() < 1e-9);
        assert!((parse(&spec("rectangle 1 0.01")).unwrap().min_width() - 0.01).abs() < 1e-9);
        assert!(parse(&spec("hull-disk-points:4 1.3")).is_ok());
        assert!(parse(&spec("disk-square 0.2")).is_ok());
    }

    #[test]
    fn bad_specs() {
        assert!(parse(&spec("blob")).is_err());
        assert!(parse(&spec("rectangle 1")).is_err());
        assert!(parse(&spec("disk x")).is_err());
        assert!(parse(&[]).is_err());
    }
}
