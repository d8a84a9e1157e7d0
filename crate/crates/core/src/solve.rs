//! End-to-end solving: routing, preprocessing, LP, rounding and lifting back
//! to the original candidate indices.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{brute_force_opt, laminar, solve_delta2_unweighted, solve_delta2_weighted, LaminarFamily};
use crate::instance::{Instance, Selection};
use crate::io::InstanceDoc;
use crate::lp::{self, Doubling, FractionalSolution};
use crate::rounding::{independent, lll, pipage_rounding, seeded, Algorithm, LllOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Auto,
    Delta2,
    Laminar,
    Oracle,
    Lll,
    Pipage,
    Independent,
}

impl Method {
    pub const ALL: [Method; 7] =
        [Method::Auto, Method::Delta2, Method::Laminar, Method::Oracle, Method::Lll, Method::Pipage, Method::Independent];

    pub fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Delta2 => "delta2",
            Method::Laminar => "laminar",
            Method::Oracle => "oracle",
            Method::Lll => "lll",
            Method::Pipage => "pipage",
            Method::Independent => "independent",
        }
    }

    fn rounding(self) -> Option<Algorithm> {
        match self {
            Method::Lll => Some(Algorithm::Lll),
            Method::Pipage => Some(Algorithm::Pipage),
            Method::Independent => Some(Algorithm::Independent),
            _ => None,
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown algorithm `{s}`")))
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub seed: u64,
    pub oracle_cap: usize,
    pub lll: LllOptions,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { seed: 0, oracle_cap: crate::exact::DEFAULT_ORACLE_CAP, lll: LllOptions::default() }
    }
}

/// Outcome of [`solve`]; `selection` indexes the original candidates and its
/// value is recomputed on the original instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Solved {
    pub selection: Selection,
    /// Method that actually ran (`auto` resolves to another one).
    pub method: Method,
    /// LP lower bound in original units, when an LP was solved.
    pub t_star: Option<f64>,
    /// Maximum degree of the instance the rounding ran on.
    pub delta: usize,
    /// LLL phase that produced the selection.
    pub phase: Option<u8>,
}

/// Bipartite instance as a laminar family over agents, one set per candidate.
pub fn as_laminar(instance: &Instance) -> Result<LaminarFamily> {
    LaminarFamily::new(instance.n_agents(), instance.candidate_adj(), instance.weights.clone(), instance.demand)
}

fn route(doc: &InstanceDoc, instance: &Instance) -> Method {
    if matches!(doc, InstanceDoc::Laminar(_)) {
        Method::Laminar
    } else if instance.degree_profile().max_degree <= 2 {
        Method::Delta2
    } else {
        Method::Pipage
    }
}

pub fn solve(doc: &InstanceDoc, method: Method, options: &SolveOptions) -> Result<Solved> {
    let instance = doc.to_instance()?;
    let method = if method == Method::Auto { route(doc, &instance) } else { method };
    let exact = |selection| Solved {
        selection,
        method,
        t_star: None,
        delta: instance.degree_profile().max_degree,
        phase: None,
    };
    match method {
        Method::Oracle => Ok(exact(brute_force_opt(&instance, true, options.oracle_cap)?)),
        Method::Laminar => {
            let family = match doc {
                InstanceDoc::Laminar(f) => f.clone(),
                InstanceDoc::Bipartite(i) => as_laminar(i)?,
            };
            Ok(exact(laminar::solve_laminar(&family)?))
        }
        Method::Delta2 => {
            let pre = instance.preprocess();
            let chosen = match &pre.residual {
                None => pre.lift(&[]),
                Some(r) if r.is_unit_weight() => pre.lift(&solve_delta2_unweighted(r)?.chosen),
                Some(r) => pre.lift(&solve_delta2_weighted(r)?.chosen),
            };
            Ok(exact(Selection::evaluate(&instance, chosen)?))
        }
        _ => {
            let algorithm = method.rounding().expect("remaining methods round an LP");
            round(&instance, algorithm, method, options)
        }
    }
}

/// Fractional point of a preprocessed instance, normalized when weighted.
pub struct Prepared {
    /// Instance the rounding runs on.
    pub work: Instance,
    pub x: FractionalSolution,
    pub weighted: bool,
    /// Threshold in original units.
    pub t_star: f64,
    /// Work candidate index to residual candidate index.
    pub kept: Vec<usize>,
}

pub enum Preparation {
    Ready(Prepared),
    /// Enough zero-weight candidates exist; the selection is optimal.
    Zero(Selection),
}

/// Solves the LP on a preprocessed instance: unit weights use the integer
/// threshold search, other weights the halving search plus normalization.
pub fn prepare(residual: &Instance) -> Result<Preparation> {
    if residual.is_unit_weight() {
        let x = lp::guess_tstar_unweighted(residual)?;
        return Ok(Preparation::Ready(Prepared {
            work: residual.clone(),
            t_star: x.t_star,
            x,
            weighted: false,
            kept: (0..residual.n_candidates).collect(),
        }));
    }
    match lp::doubling(residual)? {
        Doubling::ZeroWeight(selection) => Ok(Preparation::Zero(selection)),
        Doubling::Bound(x) => {
            let (normalized, nx) = lp::normalize(residual, x.t_star, &x)?;
            Ok(Preparation::Ready(Prepared {
                work: normalized.instance,
                x: nx,
                weighted: true,
                t_star: x.t_star,
                kept: normalized.kept,
            }))
        }
    }
}

fn round(instance: &Instance, algorithm: Algorithm, method: Method, options: &SolveOptions) -> Result<Solved> {
    let pre = instance.preprocess();
    let done = |chosen: Vec<usize>, t_star, delta, phase| -> Result<Solved> {
        Ok(Solved { selection: Selection::evaluate(instance, pre.lift(&chosen))?, method, t_star, delta, phase })
    };
    let Some(residual) = &pre.residual else {
        return done(Vec::new(), None, 0, None);
    };
    let p = match prepare(residual)? {
        Preparation::Zero(selection) => return done(selection.chosen, Some(0.0), 0, None),
        Preparation::Ready(p) => p,
    };
    let mut rng = seeded(options.seed);
    let delta = p.work.degree_profile().max_degree;
    let (chosen, phase) = match algorithm {
        Algorithm::Pipage => {
            let x = lp::trim_to_demand(&p.x, p.work.demand)?;
            (pipage_rounding(&p.work, &x, &mut rng)?.chosen, None)
        }
        Algorithm::Independent => (independent::independent_rounding(&p.work, &p.x, &mut rng)?.chosen, None),
        Algorithm::Lll => {
            let out = lll::lll_rounding(&p.work, &p.x, &mut rng, p.weighted, options.lll)?;
            (out.selection.chosen, Some(out.phase))
        }
    };
    let residual_chosen: Vec<usize> = chosen.iter().map(|&v| p.kept[v]).collect();
    done(residual_chosen, Some(p.t_star), delta, phase)
}

/// The proven value bound for `method`, given the oracle optimum where the
/// bound needs it. `None` when no bound applies.
pub fn guarantee(method: Method, n_agents: usize, delta: usize, weighted: bool, opt: Option<f64>, t_star: Option<f64>) -> Option<f64> {
    match method {
        Method::Oracle | Method::Delta2 | Method::Laminar => opt,
        Method::Lll => {
            let opt = opt?;
            let delta = delta.max(1);
            Some(if weighted {
                lll::bound_weighted_scaled(delta, opt, t_star.unwrap_or(0.0)).max(lll::bound_weighted(delta, opt))
            } else {
                lll::bound_unweighted(delta, opt)
            })
        }
        Method::Pipage | Method::Independent => {
            let t_star = t_star?;
            (n_agents >= independent::MIN_AGENTS).then(|| independent::value_bound(n_agents, t_star))
        }
        Method::Auto => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn oracle_on_gap() {
        let doc = InstanceDoc::Bipartite(gen::gap(2).unwrap());
        let s = solve(&doc, Method::Oracle, &SolveOptions::default()).unwrap();
        assert_eq!(s.selection.value, 2.0);
    }

    #[test]
    fn auto_routes_by_shape() {
        let path = gen::path_cycle(&[(gen::ComponentKind::Path, 3)], 2, gen::WeightSpec::Unit, 0).unwrap();
        let s = solve(&InstanceDoc::Bipartite(path), Method::Auto, &SolveOptions::default()).unwrap();
        assert_eq!((s.method, s.selection.value), (Method::Delta2, 1.0));

        let gap = InstanceDoc::Bipartite(gen::gap(2).unwrap());
        let s = solve(&gap, Method::Auto, &SolveOptions::default()).unwrap();
        assert_eq!(s.method, Method::Pipage);

        let lam = InstanceDoc::from_json(r#"{"n":3,"m":2,"k":1,"sets":[[0,1],[2]]}"#).unwrap();
        assert_eq!(solve(&lam, Method::Auto, &SolveOptions::default()).unwrap().method, Method::Laminar);
    }

    #[test]
    fn pipage_on_gap_picks_two() {
        let doc = InstanceDoc::Bipartite(gen::gap(2).unwrap());
        let s = solve(&doc, Method::Pipage, &SolveOptions { seed: 7, ..Default::default() }).unwrap();
        assert_eq!((s.selection.len(), s.selection.value), (2, 2.0));
    }

    #[test]
    fn weighted_rounding_lifts_to_original_indices() {
        // Candidate 3 is isolated and candidate 2 is too heavy to survive the cut.
        let i = Instance::new(4, vec![vec![0, 1, 2], vec![0, 1]], Some(vec![1.0, 2.0, 50.0, 9.0]), 2).unwrap();
        for method in [Method::Pipage, Method::Lll] {
            let s = solve(&InstanceDoc::Bipartite(i.clone()), method, &SolveOptions::default()).unwrap();
            assert!(s.selection.len() >= 2);
            assert!(s.selection.chosen.contains(&3));
            assert_eq!(s.selection.value, i.max_disagreement(&s.selection.chosen).unwrap());
        }
    }

    #[test]
    fn laminar_on_bipartite_requires_laminarity() {
        // Candidate neighbourhoods {0} , {0, 1}, {1}: nested or disjoint.
        let nested = Instance::new(3, vec![vec![0, 1], vec![1, 2]], None, 2).unwrap();
        let s = solve(&InstanceDoc::Bipartite(nested), Method::Laminar, &SolveOptions::default()).unwrap();
        assert_eq!(s.selection.value, 1.0);
        // {0, 1} and {1, 2} cross.
        let crossing = Instance::new(2, vec![vec![0], vec![0, 1], vec![1]], None, 1).unwrap();
        let err = solve(&InstanceDoc::Bipartite(crossing), Method::Laminar, &SolveOptions::default());
        assert!(matches!(err, Err(Error::NotLaminar { .. })));
    }
}
