use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::*;
use crate::arith::{is_prime, valuation};
use crate::elliptic::{a_p, c_tam, p_torsion_free_over_k, CurveQ, TamagawaProduct};
use crate::galois_image::{certify_irreducible, irreducible_over_k, GaloisImageReport};
use crate::heegner::{
    auxiliary_primes, divisibility_with_log, heegner_trace_with, norm_relation_check, universal_norm_unit, z_k_construction,
    CurveK, DivisibilityReport, HeegnerError, HeegnerResult, PointK, ReconstructionBounds, Uniformization, ZkResult, M0_CAP,
};
use crate::quadfield::{build_field, heegner_condition, QuadField};

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn record(id: impl Into<String>, status: HypothesisStatus, evidence: Value) -> HypothesisRecord {
    HypothesisRecord { id: id.into(), status, evidence }
}

fn verified_if(ok: bool) -> HypothesisStatus {
    if ok {
        HypothesisStatus::Verified
    } else {
        HypothesisStatus::Failed
    }
}

/// The numeric side of the pipeline, computed once.
struct HeegnerData {
    u: Uniformization,
    y_k: HeegnerResult,
}

fn heegner_data(e: &CurveQ, f: &QuadField, prec: u32) -> Result<HeegnerData, HeegnerError> {
    let u = Uniformization::new(e, prec)?;
    match heegner_trace_with(&u, f, 1) {
        Ok(y_k) => Ok(HeegnerData { u, y_k }),
        Err(HeegnerError::ReconstructionFailed { .. }) => {
            let u = Uniformization::new(e, 2 * prec)?;
            let y_k = heegner_trace_with(&u, f, 1)?;
            Ok(HeegnerData { u, y_k })
        }
        Err(err) => Err(err),
    }
}

/// `k y != O` for `1 <= k <= TORSION_ORDER_BOUND`, checked exactly over `K`.
fn non_torsion(c: &CurveK, y: &PointK) -> bool {
    let mut acc = PointK::Infinity;
    for _ in 0..TORSION_ORDER_BOUND {
        acc = c.add(&acc, y);
        if acc.is_infinity() {
            return false;
        }
    }
    true
}

fn divisibility_status(r: &DivisibilityReport) -> HypothesisStatus {
    if r.divisible() {
        HypothesisStatus::Failed
    } else {
        HypothesisStatus::NumericNegativeBased
    }
}

struct Factors {
    n: u64,
    a_p: Option<i64>,
    eta: i32,
    c_tam: TamagawaProduct,
}

impl Factors {
    fn divides(p: u64, v: i64) -> bool {
        v.rem_euclid(p as i64) == 0
    }

    /// `(name, value, p divides it)` for each factor of the product.
    fn table(&self, p: u64, with_eta: bool) -> Vec<(String, String, bool)> {
        let mut rows = vec![("N".to_string(), self.n.to_string(), self.n.is_multiple_of(p))];
        match self.a_p {
            Some(a) => {
                rows.push(("a_p".into(), a.to_string(), Self::divides(p, a)));
                rows.push(("a_p - 1".into(), (a - 1).to_string(), Self::divides(p, a - 1)));
                if with_eta {
                    let v = a - self.eta as i64;
                    rows.push(("a_p - eta_K(p)".into(), v.to_string(), Self::divides(p, v)));
                }
            }
            None => rows.push(("a_p".into(), "unavailable".into(), true)),
        }
        rows.push(("c_Tam".into(), self.c_tam.total.to_string(), self.c_tam.total.is_multiple_of(p)));
        rows
    }

    fn holds(&self, p: u64, with_eta: bool) -> bool {
        self.table(p, with_eta).iter().all(|r| !r.2)
    }

    fn evidence(&self, p: u64, with_eta: bool, extra: Value) -> Value {
        let rows: Vec<Value> =
            self.table(p, with_eta).into_iter().map(|(n, v, d)| json!({"factor": n, "value": v, "divisible_by_p": d})).collect();
        json!({"p": p, "eta_K(p)": self.eta, "factors": rows, "c_Tam_local": self.c_tam.factors, "universal_norm": extra})
    }
}

fn validate(req: &CertificationRequest) -> Result<(CurveQ, QuadField, u64), CertifyError> {
    if req.prime == 2 || !is_prime(req.prime) {
        return Err(CertifyError::BadRequest(format!("p = {} must be an odd prime", req.prime)));
    }
    if req.curve.len() != 5 {
        return Err(CertifyError::BadRequest("curve needs five coefficients a1,a2,a3,a4,a6".into()));
    }
    if req.prec < 30 {
        return Err(CertifyError::BadRequest("precision must be at least 30 digits".into()));
    }
    let a: [BigInt; 5] = std::array::from_fn(|i| req.curve[i].clone());
    let e = CurveQ::from_bigints(a).map_err(|err| CertifyError::BadRequest(err.to_string()))?;
    let f = build_field(req.disc).map_err(|err| CertifyError::BadRequest(err.to_string()))?;
    let n = e.conductor_u64().ok_or_else(|| CertifyError::BadRequest("conductor does not fit in 64 bits".into()))?;
    Ok((e, f, n))
}

/// Runs every check for `(E, K, p)` and assembles the certificate.
pub fn certify(req: &CertificationRequest) -> Result<Certificate, CertifyError> {
    let (e, f, n) = validate(req)?;
    let p = req.prime;
    let special = f.disc == -3 && p == 3;
    let mut errors = Vec::new();

    let heeg = heegner_condition(n, &f);
    let heeg_rec = record("heeg", verified_if(heeg.holds), json!({"level": n, "eta_K(l) for l | N": heeg.evidence}));

    let torsion = p_torsion_free_over_k(&e, p, f.disc, req.scan_bound);
    let torsion_ok = matches!(&torsion, Ok(t) if t.is_certified());
    let torsion_ev = match &torsion {
        Ok(t) => to_value(t),
        Err(err) => {
            errors.push(format!("torsion: {err}"));
            json!({"error": err.to_string()})
        }
    };

    let factors = Factors {
        n,
        a_p: a_p(&e, p).map_err(|err| errors.push(format!("a_p: {err}"))).ok(),
        eta: f.eta(p),
        c_tam: c_tam(&e),
    };
    let unorm = match universal_norm_unit(&e, &f, p, 4) {
        Ok(r) => to_value(&r),
        Err(err) => json!({"error": err.to_string()}),
    };

    let galois = certify_irreducible(&e, p, req.scan_bound);
    let galois_ok = matches!(&galois, Ok(g) if g.is_certified());
    let galois_ev = galois_evidence(&galois, &f, p);

    let data = if heeg.holds {
        heegner_data(&e, &f, req.prec).map_err(|err| errors.push(format!("heegner: {err}"))).ok()
    } else {
        None
    };
    let no_data = || json!({"reason": "no Heegner point: the Heegner condition or the trace computation failed"});
    let c = CurveK::new(&e, f.disc);

    // (c): y_K is not torsion
    let (c_ok, c_ev) = match &data {
        Some(d) => {
            let ok = !d.y_k.torsion_fallback && non_torsion(&c, &d.y_k.point);
            (ok, json!({"y_K": to_value(&d.y_k.point), "nonzero_multiples_checked": TORSION_ORDER_BOUND}))
        }
        None => (false, no_data()),
    };

    // y_K in pE(K)?
    let div = data.as_ref().map(|d| divisibility_with_log(&d.u, f.disc, &d.y_k.point, &d.y_k.log, p));
    let div = match div {
        Some(Ok(r)) => Some(r),
        Some(Err(err)) => {
            errors.push(format!("divisibility: {err}"));
            None
        }
        None => None,
    };

    let mut diagnostics = Diagnostics {
        inconsistency: false,
        guard: None,
        index_consistency: None,
        heegner: data.as_ref().map(|d| to_value(&d.y_k)),
        norm_relation: None,
        errors: Vec::new(),
        limitations: vec![
            "norm relations are checked at the bottom layer only; the tower relations need points over ring class fields of conductor p^(n+1)".into(),
            "the modular parametrization is taken optimal with Manin constant 1".into(),
            "negative divisibility verdicts are numeric at the stated precision and denominator bound".into(),
        ],
    };
    if let Some(d) = &data {
        if let Some(&q) = auxiliary_primes(n, &f, 1, 1000).first() {
            match norm_relation_check(&d.u, &f, q) {
                Ok(r) => diagnostics.norm_relation = Some(to_value(&r)),
                Err(err) => errors.push(format!("norm relation: {err}")),
            }
        }
    }

    // divisibility guard when p | u_K
    if f.u_k % p == 0 && torsion_ok {
        if let Some(r) = &div {
            diagnostics.inconsistency = !r.divisible();
            diagnostics.guard = Some(json!({
                "claim": "E(K)[p] = 0 and p | u_K force y_K in pE(K)",
                "divisible": r.divisible(),
                "witness": r.witness,
                "m0_estimate": r.m0_estimate,
            }));
        }
    }

    let (route, mut hyps, d_basis) = if special {
        eisenstein_route(req, &f, &data, &factors, unorm, torsion_ok, torsion_ev, c_ok, galois_ok, galois_ev, &mut errors)
    } else {
        generic_route(req, &factors, unorm, &div, torsion_ok, torsion_ev, c_ok, c_ev, galois_ok, galois_ev)
    };
    hyps.insert(0, heeg_rec);

    let d_assumed = hyps.iter().any(|h| h.id.ends_with("(d)") && h.status == HypothesisStatus::Assumed);
    let required_pass =
        hyps.iter().filter(|h| !(d_assumed && h.id == "6.7-irreducibility")).all(|h| h.status.passes());
    let verdict = if !required_pass || diagnostics.inconsistency {
        Verdict::NotCertified
    } else if d_assumed {
        Verdict::PartiallyCertified
    } else {
        Verdict::Certified
    };
    let conclusions = if verdict == Verdict::NotCertified { Vec::new() } else { conclusions(route, p, req.depth, &d_basis, &hyps) };

    let bounds = ReconstructionBounds::for_prec(req.prec);
    let mut cert = Certificate {
        request: req.clone(),
        route,
        verdict,
        hypotheses: hyps,
        conclusions,
        diagnostics,
        tool: ToolInfo {
            name: "heegcert".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            precision: data.as_ref().map_or(req.prec, |d| d.u.prec()),
            bounds: Bounds {
                scan_bound: req.scan_bound,
                den_bound: bounds.den_bound.to_string(),
                tol_digits: bounds.tol_digits,
                m0_cap: M0_CAP,
                torsion_order_bound: TORSION_ORDER_BOUND,
            },
        },
    };
    cert.diagnostics.errors = errors;
    let index = data.as_ref().map(|d| index_consistency_report(&f, p, &factors.c_tam, &div, &cert, d.y_k.torsion_fallback));
    cert.diagnostics.index_consistency = index.flatten().map(|r| to_value(&r));
    Ok(cert)
}

fn galois_evidence(g: &Result<GaloisImageReport, crate::galois_image::GaloisError>, f: &QuadField, p: u64) -> Value {
    match g {
        Ok(r) => {
            let over_k = irreducible_over_k(r, f, p).ok();
            json!({"over_Q": to_value(r), "over_K": over_k})
        }
        Err(err) => json!({"error": err.to_string()}),
    }
}

fn d_record(
    id: &str,
    req: &CertificationRequest,
    galois_ok: bool,
    root_test_ok: bool,
    derivation: &str,
) -> (HypothesisRecord, String) {
    if galois_ok && root_test_ok {
        let ev = json!({"derived": derivation, "requires": ["6.7-irreducibility", "root test over K"]});
        (record(id, HypothesisStatus::NumericNegativeBased, ev), "derived".into())
    } else if req.assert_rank_one_sha_trivial {
        (record(id, HypothesisStatus::Assumed, json!({"asserted_by_request": true})), "asserted".into())
    } else {
        let ev = json!({
            "reason": "not derivable: needs an irreducibility certificate and a negative root test, and no assertion was supplied",
            "irreducibility_certified": galois_ok,
            "root_test_negative": root_test_ok,
        });
        (record(id, HypothesisStatus::Failed, ev), "none".into())
    }
}

#[allow(clippy::too_many_arguments)]
fn generic_route(
    req: &CertificationRequest,
    factors: &Factors,
    unorm: Value,
    div: &Option<DivisibilityReport>,
    torsion_ok: bool,
    torsion_ev: Value,
    c_ok: bool,
    c_ev: Value,
    galois_ok: bool,
    galois_ev: Value,
) -> (Route, Vec<HypothesisRecord>, String) {
    let p = req.prime;
    let c_prime = match div {
        Some(r) => (divisibility_status(r), to_value(r)),
        None => (HypothesisStatus::Failed, json!({"reason": "no Heegner point to test"})),
    };
    let b_prime_ok = factors.holds(p, true);
    let b_ok = factors.holds(p, false);
    let derivation = "E[p] irreducible and y_K not in pE(K) give E(K) (x) Z_p = Z_p y_K and Sha(E/K)[p^inf] = 0";
    let route = if b_prime_ok && c_prime.0.passes() {
        Route::Generic
    } else {
        let (d, _) = d_record("", req, galois_ok, c_prime.0.passes(), derivation);
        if torsion_ok && b_ok && c_ok && d.status.passes() {
            Route::Tower
        } else {
            Route::Generic
        }
    };
    let t = route.tag();
    let (d, basis) = d_record(&format!("{t}(d)"), req, galois_ok, c_prime.0.passes(), derivation);
    let mut hyps = vec![record(format!("{t}(a)"), verified_if(torsion_ok), torsion_ev)];
    match route {
        Route::Tower => {
            hyps.push(record(format!("{t}(b)"), verified_if(b_ok), factors.evidence(p, false, unorm)));
            hyps.push(record(format!("{t}(c)"), verified_if(c_ok), c_ev));
        }
        _ => {
            hyps.push(record(format!("{t}(b')"), verified_if(b_prime_ok), factors.evidence(p, true, unorm)));
            hyps.push(record(format!("{t}(c')"), c_prime.0, c_prime.1));
        }
    }
    hyps.push(d);
    if basis != "asserted" || galois_ok {
        hyps.push(record("6.7-irreducibility", verified_if(galois_ok), galois_ev));
    }
    (route, hyps, basis)
}

#[allow(clippy::too_many_arguments)]
fn eisenstein_route(
    req: &CertificationRequest,
    f: &QuadField,
    data: &Option<HeegnerData>,
    factors: &Factors,
    unorm: Value,
    torsion_ok: bool,
    torsion_ev: Value,
    c_ok: bool,
    galois_ok: bool,
    galois_ev: Value,
    errors: &mut Vec<String>,
) -> (Route, Vec<HypothesisRecord>, String) {
    let route = Route::EisensteinThree;
    let t = "4.17";
    let zk: Option<ZkResult> = match data {
        Some(d) if torsion_ok => {
            z_k_construction(&d.u, f, req.scan_bound).map_err(|err| errors.push(format!("z_K: {err}"))).ok()
        }
        _ => None,
    };
    // (c'): y_{K,q} not in 3E(K); equivalently z_K not in 3E(K), i.e. y_K not in 9E(K)
    let (c_status, c_ev) = match (&zk, data) {
        (Some(z), Some(d)) => {
            let yq = divisibility_with_log(&d.u, f.disc, &z.y_kq.point, &z.y_kq.log, 3);
            let zz = divisibility_with_log(&d.u, f.disc, &z.z_k, &z.z_log, 3);
            match (yq, zz) {
                (Ok(yq), Ok(zz)) => {
                    let status = if !z.triple_is_y_k || !z.y_kq_is_multiple {
                        HypothesisStatus::Failed
                    } else if yq.divisible() || zz.divisible() {
                        HypothesisStatus::Failed
                    } else {
                        HypothesisStatus::NumericNegativeBased
                    };
                    let ev = json!({
                        "q": z.q,
                        "a_q - 1 - eta_K(q)": z.coefficient,
                        "z_K": {"point": z.z_k, "s": z.s, "t": z.t, "3 z_K = y_K": z.triple_is_y_k, "y_{K,q} = c z_K": z.y_kq_is_multiple},
                        "y_{K,q}": z.y_kq.point,
                        "y_{K,q} in 3E(K)": to_value(&yq),
                        "y_K in 9E(K)": to_value(&zz),
                    });
                    (status, ev)
                }
                (Err(err), _) | (_, Err(err)) => {
                    errors.push(format!("divisibility: {err}"));
                    (HypothesisStatus::Failed, json!({"error": err.to_string()}))
                }
            }
        }
        _ => (HypothesisStatus::Failed, json!({"reason": "z_K needs E(K)[3] = 0 and a Heegner point"})),
    };
    let derivation = "E[3] irreducible and y_K not in 9E(K) give E(K) (x) Z_3 = Z_3 z_K and Sha(E/K)[3^inf] = 0";
    let (d, basis) = d_record(&format!("{t}(d)"), req, galois_ok, c_status.passes(), derivation);
    let mut hyps = vec![
        record(format!("{t}(a)"), verified_if(torsion_ok), torsion_ev),
        record(format!("{t}(b')"), verified_if(factors.holds(3, false)), factors.evidence(3, false, unorm)),
        record(format!("{t}(c')"), c_status, c_ev),
        d,
    ];
    if basis != "asserted" || galois_ok {
        hyps.push(record("6.7-irreducibility", verified_if(galois_ok), galois_ev));
    }
    if !c_ok {
        errors.push("y_K is torsion or unavailable".into());
    }
    let q = zk.map(|z| z.q);
    (route, hyps, q.map_or(basis.clone(), |q| format!("{basis};q={q}")))
}

fn conclusions(route: Route, p: u64, depth: u32, basis: &str, hyps: &[HypothesisRecord]) -> Vec<Conclusion> {
    let (how, q) = match basis.split_once(";q=") {
        Some((b, q)) => (b, Some(q)),
        None => (basis, None),
    };
    let ids: Vec<&str> = hyps.iter().map(|h| h.id.as_str()).collect();
    let source = match (route, how) {
        (Route::Generic, "derived") => "6.9".to_string(),
        (Route::EisensteinThree, "derived") => "6.10".to_string(),
        (r, _) => format!("{} with asserted (d)", r.tag()),
    };
    let basis = format!("{source}: {}", ids.join(", "));
    let c = |layer: &str, statement: String| Conclusion { layer: layer.into(), statement, basis: basis.clone() };
    match route {
        Route::Tower => vec![
            c("K_inf", format!("Sha(E/K_inf)[{p}^inf] = 0")),
            c("K_inf", format!("the Pontryagin dual of Sel_{p}^inf(E/K_inf) is free of rank one over Z_{p}[[Gal(K_inf/K)]]")),
        ],
        Route::Generic | Route::EisensteinThree => {
            let generators = match q {
                Some(q) => format!("the traces to K_n of the Heegner points of conductors dividing 3^inf * {q}"),
                None => format!("the traces of the Heegner points of {p}-power conductor"),
            };
            let mut out = vec![
                c("K <= L <= K_inf", format!("Sha(E/L)[{p}^inf] = 0 for every intermediate field L")),
                c(
                    "K <= L <= K_inf",
                    format!("the Pontryagin dual of E(L) (x) Q_{p}/Z_{p} = Sel_{p}^inf(E/L) is free of rank one over Z_{p}[[Gal(L/K)]]"),
                ),
            ];
            for n in 0..=depth {
                let layer = format!("K_{n}");
                let rank = BigInt::from(p).pow(n);
                out.push(c(&layer, format!("rk E(K_{n}) = {p}^{n} = {rank}")));
                out.push(c(&layer, format!("Sha(E/K_{n})[{p}^inf] = 0")));
                out.push(c(&layer, format!("E(K_{n}) (x) Z_{p} is generated over Z_{p}[Gal(K_{n}/K)] by {generators}")));
            }
            out
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexPrediction {
    pub statement: String,
    /// `None` when the prediction could not be tested.
    pub holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexConsistencyReport {
    pub p: u64,
    pub u_k: u64,
    pub v_p_u_k: u32,
    pub c_tam: u64,
    pub v_p_c_tam: u32,
    /// Largest `m` found with `y_K` in `p^m E(K)`.
    pub m0_estimate: Option<u32>,
    pub predictions: Vec<IndexPrediction>,
}

/// The `p`-adic bookkeeping expected between `[E(K) : Z y_K]`, `u_K` and
/// `c_Tam`. Diagnostic only. `None` without Heegner data.
pub fn index_consistency_report(
    f: &QuadField,
    p: u64,
    tam: &TamagawaProduct,
    div: &Option<DivisibilityReport>,
    cert: &Certificate,
    torsion_trace: bool,
) -> Option<IndexConsistencyReport> {
    let div = div.as_ref()?;
    let v = |n: u64| valuation(&BigInt::from(n), p);
    let passes = |suffix: &str| cert.hypotheses.iter().any(|h| h.id.ends_with(suffix) && h.status.passes());
    let mut predictions = Vec::new();
    if passes("(a)") && passes("(c')") && !f.u_k.is_multiple_of(p) {
        predictions.push(IndexPrediction {
            statement: format!("(a) and (c') predict {p} does not divide c_Tam"),
            holds: Some(!tam.total.is_multiple_of(p)),
        });
    }
    if f.u_k.is_multiple_of(p) && !torsion_trace {
        predictions.push(IndexPrediction {
            statement: format!("u_K = {} forces {p} | [E(K) : Z y_K]", f.u_k),
            holds: passes("(a)").then_some(div.divisible()),
        });
    }
    if cert.verdict != Verdict::NotCertified {
        predictions.push(IndexPrediction {
            statement: format!("with (d), [E(K) (x) Z_{p} : Z_{p} y_K] = {p}^m0"),
            holds: div.m0_estimate.map(|_| true),
        });
    }
    Some(IndexConsistencyReport {
        p,
        u_k: f.u_k,
        v_p_u_k: v(f.u_k),
        c_tam: tam.total,
        v_p_c_tam: v(tam.total),
        m0_estimate: div.m0_estimate,
        predictions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const DESK: [i64; 5] = [0, 0, 1, -1, 0];

    #[test]
    fn desk_instance_certifies() {
        let cert = certify(&CertificationRequest::new(DESK, -7, 5)).unwrap();
        assert_eq!(cert.verdict, Verdict::Certified, "{}", cert.to_json());
        assert_eq!(cert.route, Route::Generic);
        assert_eq!(cert.failed(), Vec::<&str>::new());
        // (d) and (c') rest on the numeric root test
        assert_eq!(cert.hypothesis("4.9(c')").unwrap().status, HypothesisStatus::NumericNegativeBased);
        assert_eq!(cert.conclusions.len(), 2 + 3 * 4);
        assert!(cert.conclusions.iter().any(|c| c.statement == "rk E(K_3) = 5^3 = 125"));
    }

    #[test]
    fn p_dividing_a_p_fails_only_b_prime() {
        // a_3 = -3 for 37a1
        let cert = certify(&CertificationRequest::new(DESK, -7, 3)).unwrap();
        assert_eq!(cert.verdict, Verdict::NotCertified);
        assert_eq!(cert.failed(), vec!["4.9(b')"]);
        assert!(cert.conclusions.is_empty());
    }

    #[test]
    fn bad_requests_are_rejected() {
        assert!(certify(&CertificationRequest::new(DESK, -7, 2)).is_err());
        assert!(certify(&CertificationRequest::new(DESK, -12, 5)).is_err());
        assert!(certify(&CertificationRequest::new([0, 0, 0, 0, 0], -7, 5)).is_err());
    }

    #[test]
    fn heegner_condition_failure_is_recorded() {
        let cert = certify(&CertificationRequest::new(DESK, -8, 5)).unwrap();
        assert_eq!(cert.verdict, Verdict::NotCertified);
        assert_eq!(cert.hypothesis("heeg").unwrap().status, HypothesisStatus::Failed);
        assert!(cert.diagnostics.index_consistency.is_none());
    }

    #[test]
    fn assertion_gives_partial_certificate() {
        // 11a1 has a rational 5-isogeny, so (d) cannot be derived at p = 5;
        // (a) fails too since E(Q)[5] != 0
        let mut req = CertificationRequest::new([0, -1, 1, -10, -20], -7, 5);
        req.assert_rank_one_sha_trivial = true;
        let cert = certify(&req).unwrap();
        assert_eq!(cert.hypothesis("4.9(d)").unwrap().status, HypothesisStatus::Assumed);
        assert!(cert.failed().contains(&"4.9(a)"));
        assert_eq!(cert.verdict, Verdict::NotCertified);
    }
}
