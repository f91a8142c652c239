use std::collections::BTreeSet;
use std::path::Path;

use hypermoments::construction::{build_family, RootData};
use hypermoments::curves::FamilyJson;
use hypermoments::{parse_bivariate, parse_univariate, Bivariate, FirstMomentModel, HyperFamily, Zx};

use crate::CliError;

/// A family plus the closed-form first-moment model when one is known.
pub struct Resolved {
    pub family: HyperFamily,
    pub model: Option<FirstMomentModel>,
}

/// `1..10` (inclusive) or a comma list such as `1,-2,3`.
pub fn parse_roots(src: &str) -> Result<Vec<Zx>, CliError> {
    let bad = |what: &str| CliError::input(format!("bad root list {src:?}: {what}"));
    if let Some((lo, hi)) = src.split_once("..") {
        let lo: i64 = lo.trim().parse().map_err(|_| bad("lower end"))?;
        let hi: i64 = hi.trim().parse().map_err(|_| bad("upper end"))?;
        if lo > hi {
            return Err(bad("empty range"));
        }
        return Ok((lo..=hi).map(Zx::from).collect());
    }
    src.split(',').map(|s| s.trim().parse::<Zx>().map_err(|_| bad(s))).collect()
}

pub fn root_data(genus: u32, roots: Option<&str>) -> Result<RootData, CliError> {
    Ok(match roots {
        Some(src) => RootData::new(genus, parse_roots(src)?)?,
        None => RootData::consecutive(genus)?,
    })
}

fn power_family(params: &str) -> Result<HyperFamily, CliError> {
    let nums: Vec<u32> = params
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| CliError::input(format!("bad power family parameters {params:?}"))))
        .collect::<Result<_, _>>()?;
    let [n, h, k] = nums[..] else {
        return Err(CliError::input("power family needs n,h,k"));
    };
    let fam = hypermoments::PowerFamily::new(n, h, k)?;
    let f = Bivariate::from_terms([(Zx::from(1), fam.n(), 0), (Zx::from(1), fam.h(), fam.k())]);
    Ok(HyperFamily::new(format!("y^2 = x^{n} + x^{h}*T^{k}"), fam.genus(), f, BTreeSet::new())?)
}

pub fn resolve(src: &str, f: Option<&str>, genus: Option<u32>, roots: Option<&str>) -> Result<Resolved, CliError> {
    let need_f = |kind: &str| {
        f.ok_or_else(|| CliError::input(format!("builtin:{kind} needs --f"))).and_then(|s| Ok(parse_univariate(s)?))
    };
    if let Some(kind) = src.strip_prefix("builtin:") {
        let model = match kind {
            "shift_square" => FirstMomentModel::ShiftSquare { f: need_f(kind)? },
            "linear_twist" => FirstMomentModel::LinearTwist { f: need_f(kind)? },
            "big_rank" => build_family(&root_data(genus.unwrap_or(1), roots)?)?.first_moment_model(),
            other => match other.strip_prefix("power:") {
                Some(params) => return Ok(Resolved { family: power_family(params)?, model: None }),
                None => return Err(CliError::input(format!("unknown builtin family {other:?}"))),
            },
        };
        return Ok(Resolved { family: model.family()?, model: Some(model) });
    }
    let path = Path::new(src.strip_prefix('@').unwrap_or(src));
    if src.starts_with('@') || (src.ends_with(".json") && path.exists()) {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let json: FamilyJson = serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        return Ok(Resolved { family: HyperFamily::from_json(json)?, model: None });
    }
    let poly = parse_bivariate(src)?;
    let family = match genus {
        Some(g) => HyperFamily::new(src, g, poly, BTreeSet::new())?,
        None => HyperFamily::infer(src, poly, BTreeSet::new())?,
    };
    Ok(Resolved { family, model: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_lists() {
        assert_eq!(parse_roots("1..4").unwrap(), (1..=4).map(Zx::from).collect::<Vec<_>>());
        assert_eq!(parse_roots("1, -2,3").unwrap(), vec![Zx::from(1), Zx::from(-2), Zx::from(3)]);
        assert!(parse_roots("4..1").is_err());
        assert!(parse_roots("1,,2").is_err());
    }

    #[test]
    fn builtins() {
        let r = resolve("builtin:shift_square", Some("(x-1)*(x-2)*(x-3)"), None, None).unwrap();
        assert_eq!(r.family.genus(), 1);
        assert!(r.model.is_some());
        assert!(resolve("builtin:shift_square", None, None, None).is_err());
        let r = resolve("builtin:power:5,1,2", None, None, None).unwrap();
        assert_eq!(r.family.genus(), 2);
        assert!(resolve("builtin:power:4,1,2", None, None, None).is_err());
        assert!(resolve("builtin:nope", None, None, None).is_err());
        let r = resolve("builtin:big_rank", None, Some(1), None).unwrap();
        assert_eq!(r.model.unwrap().kind(), "big_rank");
    }

    #[test]
    fn inline_expression() {
        let r = resolve("x^5 + T*x + 1", None, None, None).unwrap();
        assert_eq!(r.family.genus(), 2);
        assert!(resolve("x^4 + T", None, None, None).is_err());
    }
}
