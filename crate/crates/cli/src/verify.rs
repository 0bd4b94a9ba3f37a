//! Enumeration drivers for the property suites behind `etafold verify`.

use etafold_core::bundle::{
    chern_family_type_i, chern_family_type_iii, classify_total_space, count_type_iii_diffeo_types,
    enumerate_standard_quotients, quotient_membership, BundleSpec, ManifoldType,
};
use etafold_core::cobordism::{beta, spinc_class, EpsilonSign, PinPlusClass};
use etafold_core::eta::{eta_closed_form_dim5, eta_series_general, pairing_data_dim4};
use etafold_core::lattice::{characteristic_classes_in_box, classes_in_box, standard_forms};
use etafold_core::series::{ahat_table, rational, sinh_ratio};
use etafold_core::{CohomologyClass, IntersectionForm};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub max_rank: usize,
    pub max_coord: i64,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

struct Suite {
    report: SuiteReport,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Self {
            report: SuiteReport {
                name,
                checks: 0,
                failures: 0,
                first_failure: None,
            },
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.report.checks += 1;
        if !ok {
            self.report.failures += 1;
            if self.report.first_failure.is_none() {
                self.report.first_failure = Some(what());
            }
        }
    }

    /// Records a failed check for an unexpected error.
    fn result<T, E: std::fmt::Display>(
        &mut self,
        r: Result<T, E>,
        ctx: impl FnOnce() -> String,
    ) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(false, || format!("{}: {e}", ctx()));
                None
            }
        }
    }
}

fn diagonal_forms(max_rank: usize) -> impl Iterator<Item = IntersectionForm> {
    (1..=max_rank).flat_map(|r| (0..=r).map(move |a| IntersectionForm::diagonal(a, r - a)))
}

fn primitive(d: &CohomologyClass) -> bool {
    !d.is_zero() && d.is_primitive().unwrap_or(false)
}

fn lattice_suite(max_rank: usize, bound: i64) -> SuiteReport {
    let mut s = Suite::new("lattice: van der Blij and Wu class");
    for f in standard_forms(max_rank) {
        let w = f.char_vector_mod2();
        s.check(f.is_spin() == w.is_zero(), || {
            format!("{f}: spin but Wu class {w}")
        });
        for d in characteristic_classes_in_box(&f, bound) {
            let d2 = f.square(&d).unwrap_or(i64::MIN);
            s.check((d2 - f.signature()).rem_euclid(8) == 0, || {
                format!("{f}, d = {d}: d^2 = {d2}")
            });
        }
    }
    s.report
}

fn cobordism_suite(max_rank: usize, bound: i64) -> SuiteReport {
    let mut s = Suite::new("cobordism: pin^+ class and signature mod 4");
    for f in standard_forms(max_rank) {
        for d in characteristic_classes_in_box(&f, bound) {
            if !primitive(&d) {
                continue;
            }
            let Some(class) = s.result(spinc_class(&f, &d), || format!("{f}, d = {d}")) else {
                continue;
            };
            for eps in EpsilonSign::BOTH {
                let Some(b) = s.result(beta(&f, &d, eps), || format!("{f}, d = {d}")) else {
                    continue;
                };
                let lin = PinPlusClass::new(class.d_squared() + 4 * eps.value() * class.index());
                s.check(b == lin, || format!("{f}, d = {d}: beta {}", b.value()));
                let p = b.value() as i64;
                let sig = f.signature();
                s.check((p - sig).rem_euclid(4) == 0, || {
                    format!("{f}, d = {d}: [P] = {p} vs sign {sig}")
                });
            }
        }
    }
    s.report
}

fn bundle_suite(max_rank: usize, bound: i64) -> SuiteReport {
    let mut s = Suite::new("bundle: trichotomy and quotient consistency");
    for f in standard_forms(max_rank) {
        for d in classes_in_box(f.rank(), bound) {
            if !primitive(&d) {
                continue;
            }
            let Some(spec) = s.result(BundleSpec::new(f.clone(), 2, d.clone()), || {
                format!("{f}, d = {d}")
            }) else {
                continue;
            };
            for eps in EpsilonSign::BOTH {
                let Some(m) =
                    s.result(classify_total_space(&spec, eps), || format!("{f}, d = {d}"))
                else {
                    continue;
                };
                let characteristic = f.is_characteristic(&d).unwrap_or(false);
                let want = if f.is_spin() {
                    ManifoldType::II
                } else if characteristic {
                    ManifoldType::III
                } else {
                    ManifoldType::I
                };
                s.check(m.manifold_type == want, || {
                    format!("{f}, d = {d}: type {}", m.manifold_type)
                });
                s.check(m.b2 as usize + 1 == f.rank(), || {
                    format!("{f}, d = {d}: b2 = {}", m.b2)
                });
                if let (Some(q), Some(t)) = (m.type_i_q, m.type_i_s) {
                    s.check((q as u32 + t as u32) % 2 == (m.b2 + 1) % 2, || {
                        format!("{f}, d = {d}: q + s parity")
                    });
                }
                let member = quotient_membership(&m, &f);
                s.check(member == Ok(true), || {
                    format!("{f}, d = {d}: base not a quotient of its total space")
                });
                if matches!(m.manifold_type, ManifoldType::II | ManifoldType::III) {
                    let Some(qs) =
                        s.result(enumerate_standard_quotients(&m), || format!("{f}, d = {d}"))
                    else {
                        continue;
                    };
                    for q in qs {
                        s.check(quotient_membership(&m, &q.form()) == Ok(true), || {
                            format!("{f}, d = {d}: {q}")
                        });
                    }
                }
            }
        }
        if !f.is_spin() {
            let Some(n) = s.result(count_type_iii_diffeo_types(&f), || f.to_string()) else {
                continue;
            };
            let want = match f.signature().rem_euclid(4) {
                0 => 3,
                2 => 2,
                _ => 4,
            };
            s.check(n == want, || format!("{f}: {n} type III classes"));
        }
    }
    s.report
}

fn family_suite(max_rank: usize) -> SuiteReport {
    let mut s = Suite::new("bundle: Chern-class families");
    for f in diagonal_forms(max_rank).filter(|f| f.rank() >= 2) {
        for eps in EpsilonSign::BOTH {
            for c in 0..4u8 {
                let Some(fam) = s.result(chern_family_type_iii(&f, 50, c, eps), || {
                    format!("{f} c = {c}")
                }) else {
                    continue;
                };
                for m in fam {
                    let ok = primitive(&m.class)
                        && f.is_characteristic(&m.class).unwrap_or(false)
                        && beta(&f, &m.class, eps).ok()
                            == Some(PinPlusClass::new(f.signature() + 4 * c as i64));
                    s.check(ok, || {
                        format!("{f}, c = {c}, eps = {eps}: d_{} = {}", m.k, m.class)
                    });
                }
            }
        }
        for q in 0..=4u8 {
            let Ok(fam) = chern_family_type_i(q, &f, 50) else {
                continue;
            };
            for m in fam {
                let d2 = f.square(&m.class).unwrap_or(i64::MIN);
                let q = q as i64;
                let ok = primitive(&m.class)
                    && !f.is_characteristic(&m.class).unwrap_or(true)
                    && ((d2 - q).rem_euclid(8) == 0 || (d2 + q).rem_euclid(8) == 0);
                s.check(ok, || format!("{f}, q = {q}: d_{} = {}", m.k, m.class));
            }
        }
    }
    s.report
}

fn eta_suite(max_rank: usize, bound: i64) -> SuiteReport {
    let mut s = Suite::new("eta: general formula, level 2 and orientation");
    for f in diagonal_forms(max_rank) {
        for d in characteristic_classes_in_box(&f, bound) {
            if !primitive(&d) {
                continue;
            }
            let Some(pd) = s.result(pairing_data_dim4(&f, &d), || format!("{f}, d = {d}")) else {
                continue;
            };
            for l in [2, 4, 6] {
                let general = eta_series_general(l, 1, &pd);
                let closed = eta_closed_form_dim5(&f, &d, l);
                s.check(general.is_ok() && general == closed, || {
                    format!("{f}, d = {d}, l = {l}")
                });
            }
            let Some(e) = s.result(eta_closed_form_dim5(&f, &d, 2), || format!("{f}, d = {d}"))
            else {
                continue;
            };
            let want = rational(-(f.square(&d).unwrap_or(0) + f.signature()), 16);
            s.check(e.value() == &want, || format!("{f}, d = {d}: eta {e}"));
            let neg = eta_closed_form_dim5(&f.negate(), &d, 2).map(|n| -n.value().clone());
            s.check(neg.as_ref() == Ok(e.value()), || {
                format!("{f}, d = {d}: antisymmetry")
            });
        }
    }
    s.report
}

fn series_suite() -> SuiteReport {
    let mut s = Suite::new("series: sinh ratio and A-hat");
    for l in 1..=6u32 {
        let Some(r) = s.result(sinh_ratio(l, 4), || format!("l = {l}")) else {
            continue;
        };
        let li = l as i64;
        s.check(
            r.coefficient_of("d^2").ok() == Some(rational(-(li * li - 1), 24 * li)),
            || format!("l = {l}"),
        );
        s.check(r.constant_term() == rational(1, li), || {
            format!("l = {l}: constant term")
        });
    }
    let t = ahat_table(2);
    let a1 = t.get(1).and_then(|p| p.coefficient_of("p1").ok());
    s.check(a1 == Some(rational(-1, 24)), || "A-hat_1".into());
    let a2 = t
        .get(2)
        .map(|p| (p.coefficient_of("p1^2").ok(), p.coefficient_of("p2").ok()));
    s.check(
        a2 == Some((Some(rational(7, 5760)), Some(rational(-4, 5760)))),
        || "A-hat_2".into(),
    );
    s.report
}

pub fn run(max_rank: usize, max_coord: i64) -> VerifyReport {
    let suites = vec![
        lattice_suite(max_rank, max_coord),
        cobordism_suite(max_rank, max_coord),
        bundle_suite(max_rank, max_coord),
        family_suite(max_rank),
        eta_suite(max_rank, max_coord),
        series_suite(),
    ];
    let passed = suites.iter().all(|s| s.failures == 0);
    VerifyReport {
        max_rank,
        max_coord,
        suites,
        passed,
    }
}
