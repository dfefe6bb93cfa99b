use expsum::charsum::{exponential_sum, point_count, sum_bound_check, LOptions, LReport};
use expsum::dwork::{b_range, b_range_nonempty, trace_formula_report, DworkParams};
use expsum::ideals::{milnor_sum, theorem_1_18_check, QuotientDim};
use expsum::koszul::{check_vanishing, default_r_bound, regular_sequence_check, FilteredComplex, VanishingMode};
use expsum::{make_field, Error, FieldSpec, MultiPoly};

use crate::config::{Analysis, Command, Settings};
use crate::report::{
    BRangeSection, FieldInfo, MilnorSection, PolyInfo, Report, SpectralSection, Status, SumRow, SumsSection,
    VanishingAttempt,
};

pub fn execute(cmd: &Command, s: &Settings) -> Report {
    let report = Report::new(cmd.name(), s);
    let report = match cmd {
        Command::Analyze(_) => analyze(report, s),
        Command::Sum(_) => sum(report, s),
        Command::Lfunction(_) => lfunction(report, s),
        Command::Spectral(_) => spectral(report, s),
        Command::CheckCi(_) => check_ci(report, s),
        Command::DworkVerify(_) => dwork_verify(report, s),
        Command::BRange(_) => brange(report, s),
    };
    report.finish()
}

/// Largest `k` with `xk` in the text, at least 1.
pub fn infer_nvars(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut n = 1;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'x' {
            let start = i + 1;
            let mut j = start;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if let Ok(k) = text[start..j].parse::<usize>() {
                n = n.max(k);
            }
            i = j;
        } else {
            i += 1;
        }
    }
    n
}

fn field(s: &Settings) -> Result<FieldSpec, Error> {
    let p = s.p.expect("validated");
    let p = u32::try_from(p).map_err(|_| Error::FieldTooLarge(format!("characteristic {p}")))?;
    make_field(p, s.a.unwrap_or(1), s.modulus.as_deref())
}

fn setup(r: &mut Report, s: &Settings) -> Option<MultiPoly> {
    let k = match field(s) {
        Ok(k) => k,
        Err(e) => {
            r.error("ff", e);
            return None;
        }
    };
    r.field = Some(FieldInfo {
        p: k.characteristic(),
        a: k.degree(),
        q: k.order(),
        modulus: k.modulus().map(<[u32]>::to_vec),
    });
    let text = s.poly.as_deref().expect("validated");
    let n = s.n.unwrap_or_else(|| infer_nvars(text));
    let f = match MultiPoly::parse(text, n, &k) {
        Ok(f) => f,
        Err(e) => {
            r.error("mpoly", e);
            return None;
        }
    };
    let info = match f.homogeneous_parts() {
        Ok(d) => PolyInfo {
            text: f.to_string(),
            n,
            delta: d.delta,
            delta_prime: d.delta_prime,
            top: d.top().to_string(),
            second: d.second().map(|g| g.to_string()),
        },
        Err(_) => PolyInfo { text: f.to_string(), n, delta: 0, delta_prime: None, top: "0".into(), second: None },
    };
    r.polynomial = Some(info);
    Some(f)
}

fn sums_section(f: &MultiPoly, i_max: usize, budget: u64) -> Result<SumsSection, Error> {
    let q = f.field().order();
    let mut rows = Vec::new();
    let mut budget_stop = None;
    for i in 1..=i_max {
        match exponential_sum(f, i, budget) {
            Ok(value) => rows.push(SumRow { i, points: point_count(q, f.nvars(), i).to_string(), value }),
            Err(Error::BudgetExceeded { .. }) => {
                budget_stop = Some(i);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(SumsSection { rows, budget_stop, bound: None })
}

/// What the spectral stage established about the hypotheses.
#[derive(Default)]
struct Hypotheses {
    /// Page 1 vanishes off the top degree (partials of the leading form are regular).
    regular: bool,
    /// Smallest page found to vanish off the top degree, to the scan bound.
    page: Option<usize>,
    /// That page satisfies the b-range inequality.
    b_range_ok: bool,
}

impl Hypotheses {
    fn degree_implied(&self) -> bool {
        self.regular || (self.page.is_some() && self.b_range_ok)
    }
}

fn analyze(mut r: Report, s: &Settings) -> Report {
    let Some(f) = setup(&mut r, s) else { return r };
    let sel = |a: Analysis| s.select.contains(&a);
    let n = f.nvars();
    let delta = f.degree().unwrap_or(0);
    let p = f.field().characteristic() as u64;

    let mut m_f: Option<u64> = None;
    if sel(Analysis::Milnor) {
        match milnor_sum(&f) {
            Ok(d) => {
                m_f = d.finite();
                r.milnor = Some(MilnorSection { m_f, isolated: d != QuotientDim::Infinite });
            }
            Err(e) => r.error("ideals", e),
        }
    }

    let mut hyp = Hypotheses::default();
    if sel(Analysis::Spectral) {
        if delta == 0 {
            r.error("koszul", "the filtration needs a polynomial of positive degree");
        } else {
            let r_bound = s.r_bound.unwrap_or_else(|| default_r_bound(n, delta));
            let mut sec = SpectralSection { r_bound, ..SpectralSection::default() };
            let top = f.homogeneous_parts().expect("nonzero").top().clone();
            match regular_sequence_check(&top) {
                Ok(rs) => {
                    hyp.regular = rs.regular;
                    sec.regular_sequence = Some(rs);
                }
                Err(e) => r.error("koszul", e),
            }
            for e in 1..=delta as usize + 1 {
                match check_vanishing(&f, e, VanishingMode::AllExceptTop, Some(r_bound)) {
                    Ok(v) => {
                        let ok = v.verified();
                        sec.vanishing.push(VanishingAttempt { e, result: v });
                        if ok {
                            hyp.page = Some(e);
                            break;
                        }
                    }
                    Err(err) => {
                        r.error("koszul", err);
                        break;
                    }
                }
            }
            if let Some(e) = hyp.page {
                sec.degeneration_page = Some(e);
                hyp.b_range_ok = e as u64 <= delta && b_range_nonempty(p, delta, e as u64).unwrap_or(false);
                let total = FilteredComplex::new(&f).map(|cx| cx.page(e, r_bound).total(n as i64));
                if let Ok(total) = total {
                    sec.top_total = Some(total);
                    if let Some(m) = m_f {
                        let status = if total as u64 == m { Status::Pass } else { Status::Inconclusive };
                        r.verdict(
                            "top-degree count",
                            status,
                            format!("sum over r <= {r_bound} of dim E_{e}^(r,{n}-r) = {total}, M_f = {m}"),
                        );
                    }
                }
                if !hyp.b_range_ok && !hyp.regular {
                    r.flags.push(format!(
                        "page {e} vanishes off the top degree but (1 + p/(p-1)^2)(e-1) < delta fails for p = {p}, delta = {delta}"
                    ));
                }
            } else {
                r.flags.push(format!("no page up to {} vanishes off the top degree (r <= {r_bound})", delta + 1));
            }
            r.spectral = Some(sec);
        }
    }

    let want_l = sel(Analysis::Lfunction) || sel(Analysis::Weil);
    if sel(Analysis::Sums) && !want_l {
        match sums_section(&f, s.i_max.unwrap_or(3), s.budget) {
            Ok(sec) => r.sums = Some(sec),
            Err(e) => r.error("charsum", e),
        }
    }
    if want_l {
        let opts = LOptions { m: s.i_max, degree_hint: None, budget: s.budget, tol: s.tol };
        match LReport::compute(&f, &opts) {
            Ok(mut l) => {
                if let Some(stop) = l.budget_stop {
                    r.flags.push(format!("partial: S_{stop} exceeds the enumeration budget"));
                }
                if sel(Analysis::Sums) {
                    let q = f.field().order();
                    let rows = l
                        .sums
                        .iter()
                        .enumerate()
                        .map(|(j, v)| SumRow { i: j + 1, points: point_count(q, n, j + 1).to_string(), value: v.clone() })
                        .collect();
                    r.sums = Some(SumsSection { rows, budget_stop: l.budget_stop, bound: None });
                }
                lambda_verdicts(&mut r, &l, m_f, &hyp, sel(Analysis::Weil));
                if !sel(Analysis::Weil) {
                    l.root_moduli = None;
                }
                r.lfunction = Some(l);
            }
            Err(e) => r.error("charsum", e),
        }
    }
    if let (Some(sec), Some(m)) = (r.sums.as_mut(), m_f) {
        if hyp.degree_implied() && !sec.rows.is_empty() {
            match sum_bound_check(&f, m, sec.rows.len(), s.budget) {
                Ok(b) => {
                    let pass = b.all_within;
                    sec.bound = Some(b);
                    let status = if pass { Status::Pass } else { Status::Inconclusive };
                    r.verdict("sum bound", status, format!("|S_i| <= {m} q^(n i/2)"));
                }
                Err(e) => r.error("charsum", e),
            }
        }
    }

    if sel(Analysis::Dwork) {
        let params = dwork_params(s, delta);
        match trace_formula_report(&f, s.i_max.unwrap_or(2), params, Some(s.budget)) {
            Ok(t) => {
                let status = if t.pass { Status::Pass } else { Status::Fail };
                let detail = format!("T_i = S_i mod p^{} for i <= {}", t.rows.first().map_or(0, |x| x.compared), t.rows.len());
                r.verdict("trace formula", status, detail);
                r.dwork = Some(t);
            }
            Err(e) => r.error("dwork", e),
        }
    }
    r
}

fn lambda_verdicts(r: &mut Report, l: &LReport, m_f: Option<u64>, hyp: &Hypotheses, weil: bool) {
    let why = if hyp.regular {
        "partials of the leading form are a regular sequence".to_string()
    } else if let Some(e) = hyp.page {
        format!("page {e} vanishes off the top degree")
    } else {
        String::new()
    };
    match (&l.lambda, l.lambda_degree) {
        (Some(_), Some(d)) => {
            if let Some(m) = m_f {
                let status = match (d as u64 == m, hyp.degree_implied()) {
                    (true, _) => Status::Pass,
                    (false, true) => Status::Fail,
                    (false, false) => Status::Inconclusive,
                };
                r.verdict("deg Lambda = M_f", status, format!("deg Lambda = {d}, M_f = {m}"));
            }
        }
        _ => {
            let (num, den) = (
                l.numerator.as_ref().map_or(0, |v| v.len().saturating_sub(1)),
                l.denominator.as_ref().map_or(0, |v| v.len().saturating_sub(1)),
            );
            let shape = format!("L = num/den with deg num = {num}, deg den = {den}");
            if hyp.degree_implied() {
                r.verdict("deg Lambda = M_f", Status::Fail, format!("Lambda is not a polynomial ({why}); {shape}"));
            } else if let Some(m) = m_f {
                r.flags.push(format!("hypothesis failure: M_f = {m} but Lambda is not a polynomial; {shape}"));
            } else {
                r.flags.push(format!("Lambda is not a polynomial; {shape}"));
            }
        }
    }
    if weil {
        if let Some(w) = &l.root_moduli {
            // purity is a theorem only in the regular case
            let status = match (w.pass, hyp.regular) {
                (true, _) => Status::Pass,
                (false, true) => Status::Fail,
                (false, false) => Status::Inconclusive,
            };
            r.verdict(
                "root moduli",
                status,
                format!("max | |alpha| - q^(n/2) | = {} over {} embeddings", w.max_deviation, w.embeddings.len()),
            );
        }
    }
}

fn dwork_params(s: &Settings, delta: u64) -> DworkParams {
    let d = DworkParams::default_for(delta);
    DworkParams { cutoff: s.cutoff_d.unwrap_or(d.cutoff), precision: s.precision_n.unwrap_or(d.precision) }
}

fn sum(mut r: Report, s: &Settings) -> Report {
    let Some(f) = setup(&mut r, s) else { return r };
    match sums_section(&f, s.i_max.unwrap_or(3), s.budget) {
        Ok(sec) => {
            if let Some(stop) = sec.budget_stop {
                r.flags.push(format!("partial: S_{stop} exceeds the enumeration budget"));
            }
            r.sums = Some(sec);
        }
        Err(e) => r.error("charsum", e),
    }
    r
}

fn lfunction(mut r: Report, s: &Settings) -> Report {
    let Some(f) = setup(&mut r, s) else { return r };
    let opts = LOptions { m: s.i_max, degree_hint: s.degree, budget: s.budget, tol: s.tol };
    match LReport::compute(&f, &opts) {
        Ok(l) => {
            if let Some(stop) = l.budget_stop {
                r.flags.push(format!("partial: S_{stop} exceeds the enumeration budget"));
            }
            match &l.lambda {
                Some(_) => {
                    if let Some(w) = &l.root_moduli {
                        let status = if w.pass { Status::Pass } else { Status::Inconclusive };
                        r.verdict("root moduli", status, format!("max deviation {}", w.max_deviation));
                    }
                }
                None => r.flags.push("Lambda is not a polynomial".into()),
            }
            r.lfunction = Some(l);
        }
        Err(e) => r.error("charsum", e),
    }
    r
}

fn spectral(mut r: Report, s: &Settings) -> Report {
    let Some(f) = setup(&mut r, s) else { return r };
    let cx = match FilteredComplex::new(&f) {
        Ok(cx) => cx,
        Err(e) => {
            r.error("koszul", e);
            return r;
        }
    };
    let n = f.nvars();
    let r_bound = s.r_bound.unwrap_or_else(|| default_r_bound(n, cx.delta()));
    let mut sec = SpectralSection { r_bound, ..SpectralSection::default() };
    let top = f.homogeneous_parts().expect("nonzero").top().clone();
    match regular_sequence_check(&top) {
        Ok(rs) => sec.regular_sequence = Some(rs),
        Err(e) => r.error("koszul", e),
    }
    let pages = s.page.unwrap_or(2);
    sec.pages = (1..=pages).map(|t| cx.page(t, r_bound)).collect();
    if let Some(e) = s.e {
        match check_vanishing(&f, e as usize, VanishingMode::AllExceptTop, Some(r_bound)) {
            Ok(v) => {
                let status = if v.verified() { Status::Pass } else { Status::Fail };
                r.verdict("vanishing", status, format!("E_{e}^(r,s) = 0 for r + s != {n}, r <= {r_bound}"));
                if v.verified() {
                    sec.degeneration_page = Some(e as usize);
                    sec.top_total = Some(cx.page(e as usize, r_bound).total(n as i64));
                }
                sec.vanishing.push(VanishingAttempt { e: e as usize, result: v });
            }
            Err(err) => r.error("koszul", err),
        }
    }
    r.spectral = Some(sec);
    r
}

fn check_ci(mut r: Report, s: &Settings) -> Report {
    let Some(f) = setup(&mut r, s) else { return r };
    let n = f.nvars();
    let mut factors = Vec::new();
    for entry in &s.factors {
        match MultiPoly::parse(&entry.poly, n, f.field()) {
            Ok(g) => factors.push((g, entry.multiplicity)),
            Err(e) => {
                r.error("mpoly", format!("factor {:?}: {e}", entry.poly));
                return r;
            }
        }
    }
    let second = match &s.second {
        Some(text) => match MultiPoly::parse(text, n, f.field()) {
            Ok(g) => Some(g),
            Err(e) => {
                r.error("mpoly", format!("second part {text:?}: {e}"));
                return r;
            }
        },
        None => f.homogeneous_parts().ok().and_then(|d| d.second().cloned()),
    };
    match theorem_1_18_check(&factors, second.as_ref(), &f) {
        Ok(ci) => {
            let status = if ci.pass { Status::Pass } else { Status::Fail };
            let detail = match ci.predicted_e {
                Some(e) => format!("predicted e = delta - delta' + 1 = {e}"),
                None => "hypotheses not satisfied".to_string(),
            };
            r.verdict("complete intersection hypotheses", status, detail);
            r.ci = Some(ci);
        }
        Err(e) => r.error("ideals", e),
    }
    r
}

fn dwork_verify(mut r: Report, s: &Settings) -> Report {
    let Some(f) = setup(&mut r, s) else { return r };
    let params = dwork_params(s, f.degree().unwrap_or(0));
    match trace_formula_report(&f, s.i_max.unwrap_or(2), params, Some(s.budget)) {
        Ok(t) => {
            let status = if t.pass { Status::Pass } else { Status::Fail };
            let compared = t.rows.first().map_or(0, |x| x.compared);
            r.verdict("trace formula", status, format!("T_i = S_i mod p^{compared} for i <= {}", t.rows.len()));
            r.dwork = Some(t);
        }
        Err(e) => r.error("dwork", e),
    }
    r
}

fn brange(mut r: Report, s: &Settings) -> Report {
    let (p, delta, e) = (s.p.expect("validated"), s.delta.expect("validated"), s.e.expect("validated"));
    match b_range(p, delta, e).and_then(|b| Ok((b, b_range_nonempty(p, delta, e)?))) {
        Ok((range, nonempty)) => {
            if range.is_empty() == nonempty {
                r.verdict("interval agrees with inequality", Status::Fail, "emptiness and inequality disagree");
            }
            r.b_range = Some(BRangeSection { range, nonempty });
        }
        Err(err) => r.error("dwork", err),
    }
    r
}
