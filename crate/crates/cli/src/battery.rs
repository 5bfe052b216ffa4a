//! The verification battery, grouped as `jordan`, `props`, `dims`, `s4`,
//! `coord` and `tkk`.

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::time::Instant;

use serde_json::{json, Value};

use ckder_core::constructions::{cheng_kac, kantor_double, truncated_poly, ChengKac, JBasis, Kantor};
use ckder_core::derivations::{
    bar_der_k, derivation_algebra, derivation_component, grade_der, inner_derivation_algebra, mu_minus_map,
    named_der_j, named_der_k, span_of_inner, z_delta_maps, z_element, JDerivation, KDerivation,
};
use ckder_core::superalg::FINE_LABELS;
use ckder_core::symmetry::{
    build_s4, check_phi_star_bracket, conjugate_der, coordinate_algebra, phi_iso, phi_star, phi_star_images, pullback,
};
use ckder_core::tkk::{
    der_as_tkk, sl2_identification, sl2_triple, so3, so3_matrices, tits_construction, tkk_3graded, tkk_3graded_dims,
    trace_form, Tits, Tkk,
};
use ckder_core::{
    CoordinateAlgebra, DerivationSpace, FieldSpec, LinearMap, S4Action, Subspace, SuperAlgebra, Verdict,
};

use crate::report::{CheckRecord, RunConfig, Status, VerificationReport, SCHEMA};

pub const GROUPS: [&str; 6] = ["jordan", "props", "dims", "s4", "coord", "tkk"];

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub witness: Option<Value>,
    pub detail: Option<String>,
}

impl Outcome {
    pub fn pass() -> Self {
        Outcome {
            status: Status::Pass,
            witness: None,
            detail: None,
        }
    }

    pub fn fail(witness: Value, detail: impl Into<String>) -> Self {
        Outcome {
            status: Status::Fail,
            witness: Some(witness),
            detail: Some(detail.into()),
        }
    }

    pub fn skipped(detail: impl Into<String>) -> Self {
        Outcome {
            status: Status::Skipped,
            witness: None,
            detail: Some(detail.into()),
        }
    }

    fn from_verdict(what: &str, v: Verdict) -> Self {
        if v.holds {
            Outcome::pass()
        } else {
            Outcome::fail(json!({ "indices": v.witness }), format!("{what}: {}", v.detail.unwrap_or_default()))
        }
    }

    /// The first failing verdict, or a pass.
    fn all(vs: Vec<(&str, Verdict)>) -> Self {
        vs.into_iter()
            .find(|(_, v)| !v.holds)
            .map_or_else(Outcome::pass, |(w, v)| Outcome::from_verdict(w, v))
    }

    /// The first failing condition, with its witness.
    fn conditions(cs: Vec<(bool, &str, Value)>) -> Self {
        cs.into_iter()
            .find(|(ok, _, _)| !ok)
            .map_or_else(Outcome::pass, |(_, what, w)| Outcome::fail(w, what))
    }
}

type Res<T> = std::result::Result<T, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn lazy<T>(cell: &OnceCell<Res<T>>, init: impl FnOnce() -> Res<T>) -> Res<&T> {
    cell.get_or_init(init).as_ref().map_err(Clone::clone)
}

/// Name of a field as `F_q`.
pub fn field_name(f: FieldSpec) -> String {
    format!("F{}", f.order())
}

/// Shared, lazily built objects for one prime.
pub struct Context {
    pub p: u32,
    pub base: FieldSpec,
    pub split: FieldSpec,
    jw: ChengKac,
    kw: Kantor,
    jv: OnceCell<Res<ChengKac>>,
    der_jw: OnceCell<DerivationSpace>,
    inder_jw: OnceCell<DerivationSpace>,
    der_k: OnceCell<DerivationSpace>,
    inder_k: OnceCell<DerivationSpace>,
    der_jv: OnceCell<Res<DerivationSpace>>,
    act: OnceCell<Res<S4Action>>,
    coord: OnceCell<Res<CoordinateAlgebra>>,
    phi: OnceCell<Res<LinearMap>>,
    t_jv: OnceCell<Res<Tits>>,
    k_jv: OnceCell<Res<Tkk>>,
}

impl Context {
    pub fn new(p: u32) -> ckder_core::Result<Self> {
        let base = FieldSpec::prime(p)?;
        let split = FieldSpec::with_sqrt_minus_one(p)?;
        let diff = truncated_poly(base, p)?;
        Ok(Context {
            p,
            base,
            split,
            jw: cheng_kac(&diff, JBasis::W)?,
            kw: kantor_double(&diff),
            jv: OnceCell::new(),
            der_jw: OnceCell::new(),
            inder_jw: OnceCell::new(),
            der_k: OnceCell::new(),
            inder_k: OnceCell::new(),
            der_jv: OnceCell::new(),
            act: OnceCell::new(),
            coord: OnceCell::new(),
            phi: OnceCell::new(),
            t_jv: OnceCell::new(),
            k_jv: OnceCell::new(),
        })
    }

    fn jv(&self) -> Res<&ChengKac> {
        lazy(&self.jv, || {
            let diff = truncated_poly(self.split, self.p).map_err(err)?;
            cheng_kac(&diff, JBasis::V).map_err(err)
        })
    }

    fn der_jw(&self) -> &DerivationSpace {
        self.der_jw.get_or_init(|| derivation_algebra(&self.jw.algebra))
    }

    fn inder_jw(&self) -> &DerivationSpace {
        self.inder_jw.get_or_init(|| inner_derivation_algebra(&self.jw.algebra))
    }

    fn der_k(&self) -> &DerivationSpace {
        self.der_k.get_or_init(|| derivation_algebra(&self.kw.algebra))
    }

    fn inder_k(&self) -> &DerivationSpace {
        self.inder_k.get_or_init(|| inner_derivation_algebra(&self.kw.algebra))
    }

    fn der_jv(&self) -> Res<&DerivationSpace> {
        lazy(&self.der_jv, || Ok(derivation_algebra(&self.jv()?.algebra)))
    }

    fn act(&self) -> Res<&S4Action> {
        lazy(&self.act, || build_s4(self.jv()?).map_err(err))
    }

    fn coord(&self) -> Res<&CoordinateAlgebra> {
        lazy(&self.coord, || coordinate_algebra(self.jv()?, self.der_jv()?, self.act()?).map_err(err))
    }

    fn phi(&self) -> Res<&LinearMap> {
        lazy(&self.phi, || phi_iso(&self.jv()?.kantor(), self.coord()?).map_err(err))
    }

    fn t_jv(&self) -> Res<&Tits> {
        lazy(&self.t_jv, || {
            let a = &self.jv()?.algebra;
            tits_construction(a, &inner_derivation_algebra(a)).map_err(err)
        })
    }

    fn k_jv(&self) -> Res<&Tkk> {
        lazy(&self.k_jv, || tkk_3graded(&self.jv()?.algebra).map_err(err))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Over {
    Base,
    Split,
}

struct Check {
    group: &'static str,
    name: &'static str,
    over: Over,
    run: fn(&Context) -> Res<Outcome>,
}

const CHECKS: &[Check] = &[
    Check { group: "jordan", name: "jordan.jck_w", over: Over::Base, run: jordan_jck_w },
    Check { group: "jordan", name: "jordan.jck_v", over: Over::Split, run: jordan_jck_v },
    Check { group: "jordan", name: "jordan.kantor", over: Over::Base, run: jordan_kantor },
    Check { group: "props", name: "props.odd_square", over: Over::Base, run: props_odd_square },
    Check { group: "props", name: "props.annihilator_w", over: Over::Base, run: props_annihilator },
    Check { group: "props", name: "props.center_even", over: Over::Base, run: props_center },
    Check { group: "props", name: "props.fine_grading", over: Over::Base, run: props_fine },
    Check { group: "dims", name: "dims.der_k", over: Over::Base, run: dims_der_k },
    Check { group: "dims", name: "dims.mu_minus", over: Over::Base, run: dims_mu_minus },
    Check { group: "dims", name: "dims.der_j", over: Over::Base, run: dims_der_j },
    Check { group: "dims", name: "dims.grade_der", over: Over::Base, run: dims_grade_der },
    Check { group: "s4", name: "s4.generators", over: Over::Split, run: s4_generators },
    Check { group: "s4", name: "s4.order", over: Over::Split, run: s4_order },
    Check { group: "s4", name: "s4.coxeter", over: Over::Split, run: s4_coxeter },
    Check { group: "s4", name: "s4.fixes_der00", over: Over::Split, run: s4_fixes },
    Check { group: "coord", name: "coord.involution", over: Over::Split, run: coord_involution },
    Check { group: "coord", name: "coord.phi", over: Over::Split, run: coord_phi },
    Check { group: "coord", name: "coord.pullback", over: Over::Split, run: coord_pullback },
    Check { group: "coord", name: "coord.unit", over: Over::Split, run: coord_unit },
    Check { group: "coord", name: "coord.phi_star", over: Over::Split, run: coord_phi_star },
    Check { group: "tkk", name: "tkk.so3", over: Over::Base, run: tkk_so3 },
    Check { group: "tkk", name: "tkk.t_k", over: Over::Split, run: tkk_t_k },
    Check { group: "tkk", name: "tkk.t_k_bar_der", over: Over::Split, run: tkk_t_k_bar },
    Check { group: "tkk", name: "tkk.t_jck", over: Over::Split, run: tkk_t_jck },
    Check { group: "tkk", name: "tkk.k_jck", over: Over::Split, run: tkk_k_jck },
    Check { group: "tkk", name: "tkk.sl2", over: Over::Split, run: tkk_sl2 },
    Check { group: "tkk", name: "tkk.der_as_tkk", over: Over::Split, run: tkk_der_as_tkk },
];

/// Names of all checks in battery order.
pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.name).collect()
}

fn dims_json(s: &DerivationSpace) -> Value {
    json!([s.dims().0, s.dims().1])
}

fn same_subspace(what: &str, got: &Subspace, want: &Subspace) -> Outcome {
    if got == want {
        Outcome::pass()
    } else {
        Outcome::fail(json!({ "got_dim": got.dim(), "expected_dim": want.dim() }), format!("{what} differs"))
    }
}

fn jordan(a: &SuperAlgebra) -> Outcome {
    Outcome::all(vec![
        ("supercommutativity", a.check_supercommutative()),
        ("Jordan identity", a.check_jordan_super()),
    ])
}

fn jordan_jck_w(c: &Context) -> Res<Outcome> {
    Ok(jordan(&c.jw.algebra))
}

fn jordan_jck_v(c: &Context) -> Res<Outcome> {
    Ok(jordan(&c.jv()?.algebra))
}

fn jordan_kantor(c: &Context) -> Res<Outcome> {
    Ok(jordan(&c.kw.algebra))
}

fn props_odd_square(c: &Context) -> Res<Outcome> {
    let a = &c.jw.algebra;
    Ok(same_subspace("J1 J1", &a.product_space(&a.odd_part(), &a.odd_part()), &a.even_part()))
}

fn props_annihilator(c: &Context) -> Res<Outcome> {
    let j = &c.jw;
    let a = &j.algebra;
    let ws: Vec<_> = (1..=3).map(|i| a.basis_vector(j.even_gen(i))).collect();
    let ann = a.annihilator(&ws).map_err(err)?;
    let zx = a.span_of_indices((0..j.m()).map(|k| j.odd(0, k)));
    if ann.dim() != c.p as usize {
        return Ok(Outcome::fail(json!({ "got_dim": ann.dim(), "expected_dim": c.p }), "annihilator dimension"));
    }
    Ok(same_subspace("Ann(w1, w2, w3) vs Zx", &ann, &zx))
}

fn props_center(c: &Context) -> Res<Outcome> {
    let j = &c.jw;
    let a = &j.algebra;
    let z = a.span_of_indices((0..j.m()).map(|k| j.even(0, k)));
    Ok(same_subspace("center of J0 vs Z", &a.center_even(), &z))
}

fn props_fine(c: &Context) -> Res<Outcome> {
    Ok(Outcome::from_verdict("Z2^2 grading", c.jw.algebra.check_fine_grading()))
}

fn dims_der_k(c: &Context) -> Res<Outcome> {
    let p = c.p as usize;
    let (der, inder) = (c.der_k(), c.inder_k());
    let want_der = if c.p == 3 { (3, 6) } else { (p, p) };
    let w = json!({
        "der_K": dims_json(der),
        "inder_K": dims_json(inder),
        "expected_der_K": [want_der.0, want_der.1],
        "expected_inder_K": [p, p],
    });
    Ok(Outcome::conditions(vec![
        (der.dims() == want_der, "dim Der(K)", w.clone()),
        (inder.dims() == (p, p), "dim Inder(K)", w.clone()),
        (c.p == 3 || der.odd() == inder.odd(), "Der(K)_1 != Inder(K)_1", w),
    ]))
}

fn dims_mu_minus(c: &Context) -> Res<Outcome> {
    if c.p != 3 {
        return Ok(Outcome::skipped("the mu^- branch exists only in characteristic 3"));
    }
    let k = &c.kw;
    let (der, inder) = (c.der_k(), c.inder_k());
    let maps: Vec<LinearMap> = z_delta_maps(&k.diff)
        .iter()
        .map(|mu| mu_minus_map(k, mu))
        .collect::<ckder_core::Result<_>>()
        .map_err(err)?;
    let bad: Vec<usize> = (0..maps.len()).filter(|&s| !k.algebra.is_derivation(&maps[s]).holds).collect();
    let span = DerivationSpace::span(&k.algebra, maps).map_err(err)?;
    let direct = DerivationSpace::is_direct_sum_of(&[inder, &span]).map_err(err)?;
    let sum = inder.sum(&span).map_err(err)?;
    let w = json!({
        "der_K_odd": der.dims().1,
        "inder_K_odd": inder.dims().1,
        "mu_minus_span": span.dim(),
        "mu_minus_not_derivations": bad,
    });
    Ok(Outcome::conditions(vec![
        (direct, "Inder(K)_1 + span{mu^-} is not direct", w.clone()),
        (sum.odd() == der.odd(), "Der(K)_1 != Inder(K)_1 + span{mu^-}", w),
    ]))
}

fn dims_der_j(c: &Context) -> Res<Outcome> {
    let p = c.p as usize;
    let (der, inder) = (c.der_jw(), c.inder_jw());
    let w = json!({ "der_J": dims_json(der), "inder_J": dims_json(inder), "p": p });
    Ok(Outcome::conditions(vec![
        (inder.dims().0 == 4 * p, "dim Inder(J)_0 != 4p", w.clone()),
        (der.dims().1 == 4 * p, "dim Der(J)_1 != 4p", w.clone()),
        (inder.dims().1 == 4 * p, "dim Inder(J)_1 != 4p", w.clone()),
        (inder.dim() == 8 * p, "dim Inder(J) != 8p", w.clone()),
        (der == inder, "Der(J) != Inder(J)", w),
    ]))
}

fn dims_grade_der(c: &Context) -> Res<Outcome> {
    let j = &c.jw;
    let a = &j.algebra;
    let m = j.m();
    let u = j.diff.unit();
    let span = |pairs: Vec<(usize, usize)>| -> Res<DerivationSpace> {
        span_of_inner(a, pairs.into_iter().map(|(x, y)| (a.basis_vector(x), a.basis_vector(y)))).map_err(err)
    };
    let all_pairs = |f0: &dyn Fn(usize) -> usize, f1: &dyn Fn(usize) -> usize| -> Vec<(usize, usize)> {
        (0..m).flat_map(|x| (0..m).map(move |y| (x, y))).map(|(x, y)| (f0(x), f1(y))).collect()
    };
    let tilde = DerivationSpace::span(
        a,
        c.der_k()
            .even_basis()
            .into_iter()
            .map(|d| named_der_j(j, &JDerivation::TildePartial(d)))
            .collect::<ckder_core::Result<Vec<_>>>()
            .map_err(err)?,
    )
    .map_err(err)?;
    let d_wi_zwj: Vec<DerivationSpace> = (1..=3)
        .map(|i| span((0..m).map(|k| (j.even(i, u), j.even(i % 3 + 1, k))).collect()))
        .collect::<Res<_>>()?;
    let d_wi_zx: Vec<DerivationSpace> = (1..=3)
        .map(|i| span((0..m).map(|k| (j.even(i, u), j.odd(0, k))).collect()))
        .collect::<Res<_>>()?;
    let d_z_zx = span(all_pairs(&|x| j.even(0, x), &|y| j.odd(0, y)))?;
    let d_x_zx = span((0..m).map(|k| (j.odd(0, u), j.odd(0, k))).collect())?;

    let comps = grade_der(c.der_jw()).map_err(err)?;
    let inner = grade_der(c.inder_jw()).map_err(err)?;
    let mut conds: Vec<(bool, String, Value)> = Vec::new();
    let mut cmp = |name: &str, got: &Subspace, want: &Subspace| {
        conds.push((got == want, format!("{name} differs"), json!({ "got_dim": got.dim(), "expected_dim": want.dim() })));
    };
    cmp("[0,0] even vs tilde-extensions", comps[0].even(), tilde.even());
    cmp("[1,0] even vs D(w2, Zw3)", comps[1].even(), d_wi_zwj[1].even());
    cmp("[0,1] even vs D(w3, Zw1)", comps[2].even(), d_wi_zwj[2].even());
    cmp("[1,1] even vs D(w1, Zw2)", comps[3].even(), d_wi_zwj[0].even());
    cmp("[0,0] odd vs D(Z, Zx)", comps[0].odd(), d_z_zx.odd());
    cmp("[1,0] odd vs D(w1, Zx)", comps[1].odd(), d_wi_zx[0].odd());
    cmp("[0,1] odd vs D(w2, Zx)", comps[2].odd(), d_wi_zx[1].odd());
    cmp("[1,1] odd vs D(w3, Zx)", comps[3].odd(), d_wi_zx[2].odd());
    cmp("Inder(J)^[0,0] even vs D(x, Zx)", inner[0].even(), d_x_zx.even());
    for fam in 1..4 {
        let s = span(all_pairs(&|x| j.even(0, x), &|y| j.odd(fam, y)))?;
        conds.push((s.dim() == 0, format!("D(Z, Zx_{fam}) != 0"), json!({ "dim": s.dim() })));
    }
    Ok(conds
        .into_iter()
        .find(|(ok, _, _)| !ok)
        .map_or_else(Outcome::pass, |(_, what, w)| Outcome::fail(w, what)))
}

fn s4_generators(c: &Context) -> Res<Outcome> {
    let act = c.act()?;
    let a = &c.jv()?.algebra;
    Ok(Outcome::all(vec![
        ("tau1", a.is_automorphism(&act.tau1)),
        ("tau2", a.is_automorphism(&act.tau2)),
        ("phi", a.is_automorphism(&act.phi)),
        ("tau", a.is_automorphism(&act.tau)),
    ]))
}

fn s4_order(c: &Context) -> Res<Outcome> {
    let n = c.act()?.order();
    Ok(Outcome::conditions(vec![(n == 24, "group order", json!({ "order": n }))]))
}

fn s4_coxeter(c: &Context) -> Res<Outcome> {
    Ok(Outcome::from_verdict("Coxeter relations", c.act()?.check_coxeter().map_err(err)?))
}

fn s4_fixes(c: &Context) -> Res<Outcome> {
    let act = c.act()?;
    let comp = derivation_component(&c.jv()?.algebra, [0, 0]).map_err(err)?;
    let basis = comp.basis();
    for (gi, g) in act.elements.iter().enumerate() {
        for (di, d) in basis.iter().enumerate() {
            if &conjugate_der(g, d).map_err(err)? != d {
                return Ok(Outcome::fail(json!({ "element": gi, "derivation": di }), "conjugation moves Der(J)^[0,0]"));
            }
        }
    }
    Ok(Outcome::pass())
}

fn coord_involution(c: &Context) -> Res<Outcome> {
    Ok(Outcome::from_verdict("involution", c.coord()?.check_involution_trivial()))
}

fn coord_phi(c: &Context) -> Res<Outcome> {
    c.phi()?;
    Ok(Outcome::pass())
}

fn coord_pullback(c: &Context) -> Res<Outcome> {
    let k = c.jv()?.kantor();
    let back = pullback(&k, c.coord()?, c.phi()?).map_err(err)?;
    let bad = (0..k.algebra.dim())
        .flat_map(|i| (0..k.algebra.dim()).map(move |j| (i, j)))
        .find(|&(i, j)| back.mul_basis(i, j) != k.algebra.mul_basis(i, j));
    Ok(match bad {
        None => Outcome::pass(),
        Some((i, j)) => Outcome::fail(json!({ "indices": [i, j] }), "pulled-back product differs from K"),
    })
}

fn coord_unit(c: &Context) -> Res<Outcome> {
    let jv = c.jv()?;
    let k = jv.kantor();
    let one = c.phi()?.image_of_basis(k.z(jv.diff.unit()));
    Ok(Outcome::conditions(vec![(c.coord()?.is_unit(&one), "Phi(1) is not a unit", json!(null))]))
}

fn coord_phi_star(c: &Context) -> Res<Outcome> {
    let jv = c.jv()?;
    let (coord, phi) = (c.coord()?, c.phi()?);
    let k = jv.kantor();
    let f = jv.field();
    let comp = grade_der(c.der_jv()?).map_err(err)?[0].clone();
    let images = phi_star_images(coord, phi, &comp).map_err(err)?;
    let image = DerivationSpace::span(&k.algebra, images).map_err(err)?;
    let bar = bar_der_k(&k);
    let inder00 = grade_der(&inner_derivation_algebra(&jv.algebra)).map_err(err)?[0].clone();
    let inner_image =
        DerivationSpace::span(&k.algebra, phi_star_images(coord, phi, &inder00).map_err(err)?).map_err(err)?;
    let w = json!({
        "der_J_00": dims_json(&comp),
        "image": dims_json(&image),
        "bar_der_K": dims_json(&bar),
        "inder_J_00_image": dims_json(&inner_image),
    });
    let mut conds = vec![
        (image.dim() == comp.dim(), "Phi* is not injective".to_string(), w.clone()),
        (image == bar, "image of Phi* != bar Der(K)".to_string(), w.clone()),
        (
            inner_image == inner_derivation_algebra(&k.algebra),
            "Phi*(Inder(J)^[0,0]) != Inder(K)".to_string(),
            w.clone(),
        ),
    ];
    let v = check_phi_star_bracket(coord, phi, &comp).map_err(err)?;
    conds.push((v.holds, "Phi* does not preserve brackets".into(), json!({ "indices": v.witness })));
    for (s, dk) in derivation_algebra(&k.algebra).even_basis().into_iter().enumerate() {
        let tilde = named_der_j(jv, &JDerivation::TildePartial(dk.clone())).map_err(err)?;
        let ok = phi_star(coord, phi, &tilde).map_err(err)? == dk;
        conds.push((ok, "Phi*(tilde d) != d".into(), json!({ "basis_index": s })));
    }
    let i = f.sqrt_minus_one().map_err(err)?;
    for s in 0..k.m() {
        let a = z_element(f, k.m(), &[(s, 1)]);
        let te = named_der_j(jv, &JDerivation::TildeEta(a.clone())).map_err(err)?.scale(i);
        let ok = phi_star(coord, phi, &te).map_err(err)? == named_der_k(&k, &KDerivation::Eta(a)).map_err(err)?;
        conds.push((ok, "Phi*(i tilde eta_a) != eta_a".into(), json!({ "z_index": s })));
    }
    Ok(conds
        .into_iter()
        .find(|(ok, _, _)| !ok)
        .map_or_else(Outcome::pass, |(_, what, w)| Outcome::fail(w, what)))
}

fn tkk_so3(c: &Context) -> Res<Outcome> {
    let f = c.base;
    let so = so3(f).map_err(err)?;
    let e = so3_matrices(f);
    let mut conds = vec![(so.check_super_lie().holds, "so3 is not a Lie algebra", json!(null))];
    for i in 0..3 {
        let next = so.bracket_basis(i, (i + 1) % 3) == [((i + 2) % 3, f.one())];
        conds.push((next, "[E_i, E_i+1] != E_i+2", json!({ "i": i + 1 })));
        let tr = trace_form(&e[i], &e[i]).map_err(err)? == f.from_i64(-2);
        conds.push((tr, "trace(E_i^2) != -2", json!({ "i": i + 1 })));
    }
    Ok(Outcome::conditions(conds))
}

fn lie_and_dims(what: &str, lie: &ckder_core::LieSuperAlgebra, want: (usize, usize)) -> Outcome {
    let v = lie.check_super_lie();
    if !v.holds {
        return Outcome::from_verdict(what, v);
    }
    let v = lie.check_grading();
    if !v.holds {
        return Outcome::from_verdict(what, v);
    }
    Outcome::conditions(vec![(
        lie.dims() == want,
        "dimension",
        json!({ "got": [lie.dims().0, lie.dims().1], "expected": [want.0, want.1] }),
    )])
}

fn tkk_t_k(c: &Context) -> Res<Outcome> {
    let k = c.jv()?.kantor();
    let inder = inner_derivation_algebra(&k.algebra);
    let t = tits_construction(&k.algebra, &inder).map_err(err)?;
    let p = c.p as usize;
    let want = (3 * p + inder.dims().0, 3 * p + inder.dims().1);
    let total = t.lie.dim();
    let out = lie_and_dims("T(K)", &t.lie, want);
    if out.status == Status::Pass && total != 8 * p {
        return Ok(Outcome::fail(json!({ "dim": total }), "dim T(K) != 8p"));
    }
    Ok(out)
}

fn tkk_t_k_bar(c: &Context) -> Res<Outcome> {
    let k = c.jv()?.kantor();
    let bar = bar_der_k(&k);
    let t = tits_construction(&k.algebra, &bar).map_err(err)?;
    let p = c.p as usize;
    let der = c.der_jv()?;
    let out = lie_and_dims("T(K, bar Der(K))", &t.lie, (3 * p + bar.dims().0, 3 * p + bar.dims().1));
    if out.status == Status::Pass && t.lie.dim() != der.dim() {
        return Ok(Outcome::fail(
            json!({ "dim": t.lie.dim(), "der_J_dim": der.dim() }),
            "dim T(K, bar Der(K)) != dim Der(J)",
        ));
    }
    Ok(out)
}

fn tkk_t_jck(c: &Context) -> Res<Outcome> {
    let p = c.p as usize;
    Ok(lie_and_dims("T(J)", &c.t_jv()?.lie, (16 * p, 16 * p)))
}

fn tkk_k_jck(c: &Context) -> Res<Outcome> {
    let p = c.p as usize;
    Ok(lie_and_dims("K(J)", &c.k_jv()?.lie, (16 * p, 16 * p)))
}

fn tkk_sl2(c: &Context) -> Res<Outcome> {
    sl2_identification(c.t_jv()?, c.k_jv()?).map_err(err)?;
    Ok(Outcome::pass())
}

fn tkk_der_as_tkk(c: &Context) -> Res<Outcome> {
    der_as_tkk(c.jv()?, c.act()?, c.coord()?, c.phi()?).map_err(err)?;
    Ok(Outcome::pass())
}

/// Dimensions over the prime field, with `J` in the `w` basis.
pub fn dims_table(c: &Context) -> Res<BTreeMap<String, usize>> {
    let mut t = BTreeMap::new();
    let mut put = |k: &str, v: usize| {
        t.insert(k.to_string(), v);
    };
    let (k, j) = (&c.kw, &c.jw);
    put("Z_dim", k.m());
    put("K_dim", k.algebra.dim());
    put("J_dim", j.algebra.dim());
    let pairs = [
        ("der_K", c.der_k()),
        ("inder_K", c.inder_k()),
        ("der_J", c.der_jw()),
        ("inder_J", c.inder_jw()),
    ];
    for (name, s) in pairs {
        put(&format!("{name}_even"), s.dims().0);
        put(&format!("{name}_odd"), s.dims().1);
        put(&format!("{name}_dim"), s.dim());
    }
    let der_comps = grade_der(c.der_jw()).map_err(err)?;
    let inder_comps = grade_der(c.inder_jw()).map_err(err)?;
    for (l, (d, i)) in FINE_LABELS.iter().zip(der_comps.iter().zip(&inder_comps)) {
        let tag = format!("{}{}", l[0], l[1]);
        put(&format!("der_J_{tag}_even"), d.dims().0);
        put(&format!("der_J_{tag}_odd"), d.dims().1);
        put(&format!("inder_J_{tag}_even"), i.dims().0);
        put(&format!("inder_J_{tag}_odd"), i.dims().1);
    }
    let bar = bar_der_k(k);
    put("bar_der_K_dim", bar.dim());
    put("T_K_dim", 3 * k.algebra.dim() + c.inder_k().dim());
    put("T_K_bar_der_dim", 3 * k.algebra.dim() + bar.dim());
    let (ke, ko) = tkk_3graded_dims(&j.algebra).map_err(err)?;
    put("K_J_even", ke);
    put("K_J_odd", ko);
    put("K_J_dim", ke + ko);
    Ok(t)
}

/// Which groups to run; `all` selects every group.
pub fn select(groups: &[String]) -> Result<Vec<&'static str>, String> {
    if groups.iter().any(|g| g == "all") {
        return Ok(GROUPS.to_vec());
    }
    let mut out = Vec::new();
    for g in groups {
        let found = GROUPS
            .iter()
            .find(|&&x| x == g.as_str())
            .ok_or_else(|| format!("unknown check group '{g}' (expected all, {})", GROUPS.join(", ")))?;
        if !out.contains(found) {
            out.push(*found);
        }
    }
    Ok(GROUPS.iter().copied().filter(|g| out.contains(g)).collect())
}

pub fn run_battery(p: u32, groups: &[&str]) -> ckder_core::Result<VerificationReport> {
    let ctx = Context::new(p)?;
    let mut checks = Vec::new();
    for check in CHECKS.iter().filter(|c| groups.contains(&c.group)) {
        let field = field_name(match check.over {
            Over::Base => ctx.base,
            Over::Split => ctx.split,
        });
        let start = Instant::now();
        let outcome = (check.run)(&ctx).unwrap_or_else(|e| Outcome::fail(json!({ "error": e.clone() }), e));
        checks.push(CheckRecord {
            name: check.name.into(),
            group: check.group.into(),
            field,
            status: outcome.status,
            witness: outcome.witness,
            detail: outcome.detail,
            wall_ms: start.elapsed().as_millis(),
        });
    }
    let dims = dims_table(&ctx).map_err(ckder_core::Error::Verification)?;
    let mut notes = Vec::new();
    if groups.contains(&"tkk") {
        let f = ctx.split;
        let t = sl2_triple(f)?;
        let show = |v: &[ckder_core::Scalar; 3]| v.iter().map(|&x| f.fmt_scalar(x)).collect::<Vec<_>>().join(", ");
        notes.push(format!(
            "sl2 triple over {} in the basis E1, E2, E3: e = ({}), h = ({}), f = ({})",
            field_name(f),
            show(&t.e),
            show(&t.h),
            show(&t.f)
        ));
        notes.push(
            "Der(J) is matched with T(K, bar Der(K)) and Inder(J) with T(K); both Tits constructions are taken over K = Z + Zx"
                .into(),
        );
    }
    Ok(VerificationReport {
        schema: SCHEMA.into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        config: RunConfig {
            p,
            field: field_name(ctx.base),
            split_field: field_name(ctx.split),
            basis: "w (v for s4, coord, tkk and jordan.jck_v)".into(),
            checks: groups.iter().map(|g| g.to_string()).collect(),
        },
        checks,
        dims,
        notes,
    })
}
