//! Plain-text forms of the results.

use std::fmt::Write;

use rrf_core::{
    DistanceResult, FeasibilityStatus, FeasibilityVerdict, RrfEstimate, RrfReport,
    SeparabilityRadius,
};

fn g(v: f64) -> String {
    format!("{v:.10}")
}

pub fn bounds(r: &RrfReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "base      {} (c1 = {}, c2 = {}{})",
        r.base.kind.name(),
        g(r.c1),
        g(r.c2),
        if r.c1_exact { "" } else { ", c1 conservative" }
    );
    let _ = writeln!(s, "distance  [{}, {}]", g(r.dist_lo), g(r.dist_hi));
    let _ = writeln!(
        s,
        "rrf       [{}, {}]{}",
        g(r.rrf_lower),
        g(r.rrf_upper),
        if r.exact { " exact" } else { "" }
    );
    let _ = writeln!(
        s,
        "solver    {} iterations, {}",
        r.iterations,
        if r.converged {
            "converged"
        } else {
            "not converged"
        }
    );
    for d in &r.diagnostics {
        let rrf_core::Diagnostic::VacuousLowerBound { slater_margin } = d;
        let _ = match slater_margin {
            Some(m) => writeln!(
                s,
                "note      lower bound is vacuous (slater margin {})",
                g(*m)
            ),
            None => writeln!(s, "note      lower bound is vacuous"),
        };
    }
    s
}

pub fn dist(d: &DistanceResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "dist      [{}, {}]", g(d.dist_lo), g(d.dist_hi));
    let _ = writeln!(s, "f         [{}, {}]", g(d.f_lo), g(d.f_hi));
    let lambda: Vec<String> = d.lambda_star.iter().map(|v| g(*v)).collect();
    let _ = writeln!(s, "lambda    ({})", lambda.join(", "));
    let _ = writeln!(
        s,
        "solver    {} iterations, {}",
        d.iterations,
        if d.converged {
            "converged"
        } else {
            "not converged"
        }
    );
    s
}

pub fn verdict(v: &FeasibilityVerdict) -> String {
    let status = match &v.status {
        FeasibilityStatus::FeasibleWitness(x) => {
            let x: Vec<String> = x.iter().map(|t| g(*t)).collect();
            format!("FeasibleWitness x = ({})", x.join(", "))
        }
        FeasibilityStatus::LikelyInfeasible => "LikelyInfeasible".into(),
        FeasibilityStatus::CertifiedInfeasible => "CertifiedInfeasible".into(),
    };
    format!(
        "status    {status}\nmargin    {}\nsupremum  {}\n",
        g(v.margin),
        if v.exact { "exact" } else { "sampled" }
    )
}

pub fn estimate(e: &RrfEstimate) -> String {
    format!(
        "estimate  {}\nbracket   [{}, {}]\n",
        g(e.estimate),
        g(e.lo),
        g(e.hi)
    )
}

pub fn svm(r: &SeparabilityRadius) -> String {
    format!(
        "r_star_lo {}\ndistance  [{}, {}]\nlifted    rrf <= {}\nsolver    {} iterations, {}\n",
        g(r.r_star_lo),
        g(r.dist_lo),
        g(r.dist_hi),
        g(r.lifted_rrf_upper),
        r.iterations,
        if r.converged {
            "converged"
        } else {
            "not converged"
        }
    )
}
