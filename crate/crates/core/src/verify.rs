//! The acceptance checks, shared by the `verify` command and the acceptance test target.

use crate::diagrams::{
    arrow_alphabet, build_d0, build_ti, format_arrow_word, sector_permutation, ArrowAlphabet,
    TransitionDiagram,
};
use crate::error::{Error, Result};
use crate::farey::{direction_from_itinerary, gamma, itinerary, reflection};
use crate::hooper::{moduli, modulus_formula};
use crate::linalg::{Mat2, Vec2};
use crate::renorm::{
    derive, derive_cyclic, fixed_point_form, pseudo_substitution, substitution, DualPair,
    Generator, SurfaceTables,
};
use crate::surface::{build_surface, PolygonalSurface, SurfaceParams};
use crate::tracer::{realize_periodic, realize_word, trace_random};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

/// Surfaces used by the per-surface checks.
pub const SMALL_SET: [(usize, usize); 6] = [(3, 4), (4, 3), (3, 5), (5, 3), (4, 5), (5, 4)];

/// Golden pseudo-substitution entries that contradict their own generation diagrams, with the
/// images used instead:
/// `(m, n, sector, arrow, corrected image)`.
pub const PSEUDO_ERRATA: [(usize, usize, usize, &str, &str); 2] =
    [(4, 3, 2, "r3", "r2 v3"), (4, 3, 2, "r6", "l1 v3")];

const TRANSITION_43: &str = include_str!("../golden/transition_43.json");
const TRANSITION_34: &str = include_str!("../golden/transition_34.json");
const PSEUDO_43: &str = include_str!("../golden/pseudo_43.json");
const PSEUDO_34: &str = include_str!("../golden/pseudo_34.json");
const SUBSTITUTION_11_43: &str = include_str!("../golden/substitution_11_43.json");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub surfaces: Vec<(usize, usize)>,
    pub seed: u64,
    /// Directions per surface for derivability and itinerary agreement.
    pub trials: usize,
    pub window: usize,
    pub max_window: usize,
    pub depth: usize,
    pub geometric_trials: usize,
    pub generation_words: usize,
    pub conjugacy_words: usize,
    pub recognition_trials: usize,
    pub recognition_terms: usize,
    pub recognition_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            surfaces: SMALL_SET.to_vec(),
            seed: 7,
            trials: 200,
            window: 400,
            max_window: 64_000,
            depth: 6,
            geometric_trials: 100,
            generation_words: 100,
            conjugacy_words: 1000,
            recognition_trials: 100,
            recognition_terms: 25,
            recognition_tol: 1e-6,
        }
    }
}

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub failures: usize,
    /// Trials set aside (boundary orbits, windows admissible in two sectors).
    pub excluded: usize,
    pub max_deviation: f64,
    pub notes: Vec<String>,
}

impl CheckResult {
    fn new(id: u8, name: &str) -> Self {
        Self {
            id,
            name: name.to_string(),
            passed: false,
            checked: 0,
            failures: 0,
            excluded: 0,
            max_deviation: 0.0,
            notes: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, note: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.notes.len() < 8 {
                self.notes.push(note());
            }
        }
    }

    fn deviation(&mut self, d: f64) {
        self.max_deviation = self.max_deviation.max(d);
    }

    fn finish(mut self) -> Self {
        self.passed = self.failures == 0 && self.checked > 0;
        self
    }

    /// One-line summary.
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {}: {} checked, {} failed, {} excluded, max deviation {:.3e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.checked,
            self.failures,
            self.excluded,
            self.max_deviation
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub config: VerifyConfig,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

/// Runs all twelve checks.
pub fn run_all(cfg: &VerifyConfig) -> Result<Report> {
    let (derivability, itineraries) = check_derivability(cfg)?;
    let checks = vec![
        check_derivation_example(),
        check_substitution_tables()?,
        check_permutations(),
        check_diagrams()?,
        check_moduli(cfg)?,
        derivability,
        itineraries,
        check_geometric(cfg)?,
        check_generation(cfg)?,
        check_conjugacy(cfg)?,
        check_recognition(cfg)?,
        check_fixed_points()?,
    ];
    let passed = checks.iter().all(|c| c.passed);
    Ok(Report {
        config: cfg.clone(),
        checks,
        passed,
    })
}

fn rng_for(seed: u64, id: u8, m: usize, n: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ ((id as u64) << 48) ^ ((m as u64) << 32) ^ ((n as u64) << 16))
}

fn surface(m: usize, n: usize) -> Result<PolygonalSurface> {
    build_surface(SurfaceParams::renormalizable(m, n)?)
}

/// Random path of `len` vertices in a transition diagram.
pub fn random_admissible_word<R: Rng>(t: &TransitionDiagram, len: usize, rng: &mut R) -> Vec<u32> {
    let mut out: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for (a, b) in t.arrows() {
        out.entry(a).or_default().push(b);
    }
    let labels: Vec<u32> = out.keys().copied().collect();
    let mut w = vec![labels[rng.gen_range(0..labels.len())]];
    while w.len() < len {
        let next = &out[w.last().expect("nonempty")];
        w.push(next[rng.gen_range(0..next.len())]);
    }
    w
}

/// Direction in `(lo, hi)` at least `1e-6` away from every multiple of `pi/n`.
fn random_direction<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> f64 {
    let w = PI / n as f64;
    loop {
        let t: f64 = rng.gen_range(lo..hi);
        let r = t / w;
        if (r - r.round()).abs() * w > 1e-6 {
            return t;
        }
    }
}

/// Check 1: Cyclic derivation of `1678785452` on `M(4, 3)`.
pub fn check_derivation_example() -> CheckResult {
    let mut c = CheckResult::new(1, "derivation golden word");
    let got = derive_cyclic(4, 3, &[1, 6, 7, 8, 7, 8, 5, 4, 5, 2]);
    c.record(got.as_deref() == Ok(&[4, 3, 4, 7, 6, 1][..]), || {
        format!("got {got:?}")
    });
    c.finish()
}

fn compare_images(
    c: &mut CheckResult,
    what: &str,
    got: &BTreeMap<crate::diagrams::ArrowName, Vec<crate::diagrams::ArrowName>>,
    golden: &BTreeMap<String, String>,
    errata: &[(&str, &str)],
) {
    c.record(got.len() == golden.len(), || {
        format!("{what}: {} images, golden has {}", got.len(), golden.len())
    });
    for (name, img) in got {
        let key = name.to_string();
        let mut expect = golden.get(&key).cloned().unwrap_or_default();
        if let Some((_, fixed)) = errata.iter().find(|(a, _)| *a == key) {
            c.notes
                .push(format!("{what}({key}): golden {expect}, used {fixed}"));
            expect = fixed.to_string();
        }
        let shown = format_arrow_word(img);
        c.record(shown == expect, || {
            format!("{what}({key}) = {shown}, expected {expect}")
        });
    }
}

/// Check 2: `sigma_{1,1}^{4,3}` and the pseudo-substitution tables of `M(4, 3)` and `M(3, 4)`.
pub fn check_substitution_tables() -> Result<CheckResult> {
    let mut c = CheckResult::new(2, "substitution and pseudo-substitution tables");
    let sigma: BTreeMap<String, String> = parse_json(SUBSTITUTION_11_43)?;
    compare_images(
        &mut c,
        "sigma_11^43",
        &substitution(4, 3, 1, 1)?.images,
        &sigma,
        &[],
    );
    for (m, n, text) in [(4, 3, PSEUDO_43), (3, 4, PSEUDO_34)] {
        let tables: BTreeMap<String, BTreeMap<String, String>> = parse_json(text)?;
        for (i, golden) in &tables {
            let i: usize = i
                .parse()
                .map_err(|_| Error::MalformedDiagram(format!("sector {i}")))?;
            let errata: Vec<(&str, &str)> = PSEUDO_ERRATA
                .iter()
                .filter(|e| (e.0, e.1, e.2) == (m, n, i))
                .map(|e| (e.3, e.4))
                .collect();
            let ps = pseudo_substitution(m, n, i)?;
            compare_images(
                &mut c,
                &format!("ps_{i}^{m}{n}"),
                &ps.images,
                golden,
                &errata,
            );
        }
    }
    Ok(c.finish())
}

#[derive(Debug, Deserialize)]
struct TransitionGolden {
    m: usize,
    n: usize,
    grids: Vec<Vec<Vec<u32>>>,
    permutations: Vec<String>,
    d0_labels: Vec<(u32, u32, u32)>,
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::MalformedDiagram(format!("golden data: {e}")))
}

/// Check 3: Sector permutations of `M(4, 3)` and `M(3, 4)`; reflection matrices for `n = 3`.
pub fn check_permutations() -> CheckResult {
    let mut c = CheckResult::new(3, "sector permutations and reflection matrices");
    for text in [TRANSITION_43, TRANSITION_34] {
        let Ok(g) = parse_json::<TransitionGolden>(text) else {
            c.record(false, || "golden data unreadable".into());
            continue;
        };
        for (i, expect) in g.permutations.iter().enumerate() {
            let got = sector_permutation(g.m, g.n, i).to_string();
            c.record(&got == expect, || {
                format!("pi_{i}^{}{} = {got}, expected {expect}", g.m, g.n)
            });
        }
    }
    let h = 3f64.sqrt() / 2.0;
    let expected = [
        Mat2::new(1.0, 0.0, 0.0, 1.0),
        Mat2::new(-0.5, h, h, 0.5),
        Mat2::new(-1.0, 0.0, 0.0, 1.0),
    ];
    for (i, e) in expected.iter().enumerate() {
        let r = reflection(4, 3, i);
        let neg = Mat2::new(-r.a, -r.b, -r.c, -r.d);
        let d = r.max_abs_diff(e).min(neg.max_abs_diff(e));
        c.deviation(d);
        c.record(d <= 1e-12, || format!("reflection {i} off by {d:e}"));
    }
    c.finish()
}

fn universal_arrows(t: &TransitionDiagram) -> BTreeSet<(u32, u32)> {
    let mut out = BTreeSet::new();
    let rows = t.grid.len();
    for r in 0..rows {
        for c in 0..t.grid[r].len() {
            if c + 1 < t.grid[r].len() {
                out.insert((t.grid[r][c], t.grid[r][c + 1]));
                out.insert((t.grid[r][c + 1], t.grid[r][c]));
            }
            if r + 1 < rows {
                let (up, down) = (t.grid[r][c], t.grid[r + 1][c]);
                out.insert(if c % 2 == 0 { (up, down) } else { (down, up) });
            }
        }
    }
    out
}

/// Check 4: `T_i` and `D_0` of `M(4, 3)` and `M(3, 4)`; arrow alphabet sizes.
pub fn check_diagrams() -> Result<CheckResult> {
    let mut c = CheckResult::new(4, "transition and derivation diagrams");
    for text in [TRANSITION_43, TRANSITION_34] {
        let g: TransitionGolden = parse_json(text)?;
        for (i, grid) in g.grids.iter().enumerate() {
            let t = build_ti(g.m, g.n, i);
            let got = serde_json::to_string(&t.grid).unwrap_or_default();
            let expect = serde_json::to_string(grid).unwrap_or_default();
            c.record(got == expect, || {
                format!("T_{i}^{}{} = {got}, expected {expect}", g.m, g.n)
            });
            let arrows: BTreeSet<(u32, u32)> = t.arrows().into_iter().collect();
            c.record(arrows == universal_arrows(&t), || {
                format!("T_{i}^{}{} arrows differ", g.m, g.n)
            });
        }
        let d0 = build_d0(g.m, g.n);
        let got: BTreeSet<(u32, u32, u32)> = d0
            .labelled_arrows()
            .into_iter()
            .filter_map(|(a, b, l)| l.map(|l| (a, b, l)))
            .collect();
        let expect: BTreeSet<(u32, u32, u32)> = g.d0_labels.iter().copied().collect();
        c.record(got == expect, || {
            format!("D_0^{}{} labels differ: {got:?}", g.m, g.n)
        });
    }
    for (m, n) in SMALL_SET {
        let size = arrow_alphabet(m, n).len();
        let expect = ArrowAlphabet::expected_size(m, n);
        c.record(
            size == expect && size + 2 * m + 4 * n == 3 * m * n + 2,
            || format!("alphabet of M({m},{n}) has {size} arrows, expected {expect}"),
        );
    }
    Ok(c.finish())
}

/// Check 5: Moduli of all cylinders from Hooper widths and heights.
pub fn check_moduli(cfg: &VerifyConfig) -> Result<CheckResult> {
    let mut c = CheckResult::new(5, "cylinder moduli");
    for &(m, n) in &cfg.surfaces {
        let mods = moduli(m, n)?;
        let f = modulus_formula(m, n);
        let (lo, hi) = mods
            .values()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| {
                (l.min(x), h.max(x))
            });
        c.deviation(hi - lo);
        c.record(hi - lo <= 1e-9, || {
            format!("M({m},{n}) moduli spread {:e}", hi - lo)
        });
        for (node, &x) in &mods {
            c.deviation((x - f).abs());
            c.record((x - f).abs() <= 1e-9, || {
                format!("M({m},{n}) cylinder {node:?}: {x} vs {f}")
            });
        }
    }
    Ok(c.finish())
}

/// Outcome of renormalizing one traced window.
enum Renormalized {
    Sectors(Vec<usize>),
    /// Some derivative is admissible in more than one sector.
    Ambiguous,
    Exhausted,
    NotAdmissible(String),
}

fn renormalize_window(pair: &DualPair, w: &[u32], depth: usize) -> Renormalized {
    let mut word = w.to_vec();
    let mut sectors = Vec::with_capacity(depth + 1);
    let mut ambiguous = false;
    for step in 0..=depth {
        let side = pair.side(step % 2 == 1);
        let adm = side.admissible_sectors(&word);
        if adm.is_empty() {
            return Renormalized::NotAdmissible(format!(
                "derivative {step} admissible in no sector"
            ));
        }
        ambiguous |= adm.len() > 1;
        let (s, normalized) = match side.normalize(&word) {
            Ok(x) => x,
            Err(e) => return Renormalized::NotAdmissible(e.to_string()),
        };
        sectors.push(s);
        if step == depth {
            break;
        }
        word = match side.derive(&normalized) {
            Ok(d) => d,
            Err(e) => return Renormalized::NotAdmissible(e.to_string()),
        };
        if word.len() < 2 {
            return Renormalized::Exhausted;
        }
    }
    if ambiguous {
        Renormalized::Ambiguous
    } else {
        Renormalized::Sectors(sectors)
    }
}

/// Checks 6 and 7: Infinite derivability of traced words and agreement of their sector sequence with
/// the Farey itinerary, over the same trials. Windows grow by factors of 4 until every
/// derivative lies in a single sector or `max_window` is reached.
pub fn check_derivability(cfg: &VerifyConfig) -> Result<(CheckResult, CheckResult)> {
    let mut c6 = CheckResult::new(6, "infinite derivability");
    let mut c7 = CheckResult::new(7, "sector sequence equals Farey itinerary");
    let mut largest = 0;
    for &(m, n) in &cfg.surfaces {
        let s = surface(m, n)?;
        let pair = DualPair::new(m, n)?;
        let mut rng = rng_for(cfg.seed, 6, m, n);
        let mut quarantined = 0;
        for _ in 0..cfg.trials {
            let theta = random_direction(&mut rng, n, 0.0, PI);
            let mut window = cfg.window;
            let outcome = loop {
                let w = match trace_random(&s, theta, window, &mut rng) {
                    Ok(w) => w,
                    Err(e) => break Renormalized::NotAdmissible(format!("trace failed: {e}")),
                };
                let r = renormalize_window(&pair, &w.labels, cfg.depth);
                let retry = matches!(r, Renormalized::Ambiguous | Renormalized::Exhausted);
                if !retry || window >= cfg.max_window {
                    break r;
                }
                window = (window * 4).min(cfg.max_window);
            };
            largest = largest.max(window);
            match outcome {
                Renormalized::NotAdmissible(e) => {
                    c6.record(false, || format!("M({m},{n}) theta={theta}: {e}"));
                    c7.excluded += 1;
                }
                Renormalized::Exhausted => {
                    c6.excluded += 1;
                    c7.excluded += 1;
                }
                Renormalized::Ambiguous => {
                    c6.record(true, String::new);
                    c7.excluded += 1;
                    quarantined += 1;
                }
                Renormalized::Sectors(sectors) => {
                    c6.record(true, String::new);
                    match itinerary(m, n, theta, cfg.depth / 2) {
                        Err(Error::BoundaryOrbit { .. }) => {
                            c7.excluded += 1;
                            quarantined += 1;
                        }
                        Err(e) => return Err(e),
                        Ok(it) => {
                            let mut farey = vec![it.b0];
                            for (a, b) in it.pairs {
                                farey.push(a);
                                farey.push(b);
                            }
                            let k = farey.len().min(sectors.len());
                            c7.record(farey[..k] == sectors[..k], || {
                                format!("M({m},{n}) theta={theta}: sectors {sectors:?}, itinerary {farey:?}")
                            });
                        }
                    }
                }
            }
        }
        c7.notes
            .push(format!("M({m},{n}): {quarantined} trials quarantined"));
    }
    c6.notes.push(format!("largest window used: {largest}"));
    Ok((c6.finish(), c7.finish()))
}

/// Check 8: Derived words occur on the dual surface along the direction `gamma theta`.
pub fn check_geometric(cfg: &VerifyConfig) -> Result<CheckResult> {
    let mut c = CheckResult::new(8, "derived word traced on the dual surface");
    for &(m, n) in &cfg.surfaces {
        let s = surface(m, n)?;
        let dual = surface(n, m)?;
        let g = gamma(m, n);
        let mut rng = rng_for(cfg.seed, 8, m, n);
        for _ in 0..cfg.geometric_trials {
            let theta = random_direction(&mut rng, n, 0.0, PI / n as f64);
            let w = trace_random(&s, theta, 100, &mut rng)?;
            let d = derive(m, n, &w.labels)?;
            let v = g.apply(Vec2::from_angle(theta));
            let phi = v.y.atan2(v.x);
            let found = !d.is_empty() && realize_word(&dual, phi, &d)?.is_some();
            c.record(found, || {
                format!("M({m},{n}) theta={theta}: {d:?} not found")
            });
        }
    }
    Ok(c.finish())
}

/// Check 9: `normalize o derive o generate(i, .)` is the identity and recovers `i`.
pub fn check_generation(cfg: &VerifyConfig) -> Result<CheckResult> {
    let mut c = CheckResult::new(9, "generation inverts derivation");
    for &(m, n) in &cfg.surfaces {
        let g = Generator::new(m, n)?;
        let mut rng = rng_for(cfg.seed, 9, m, n);
        for i in 1..m {
            for _ in 0..cfg.generation_words {
                let w = random_admissible_word(g.pair.dual.t0(), 24, &mut rng);
                let back = g
                    .to_primal(i, &w)
                    .and_then(|u| g.pair.primal.derive(&u))
                    .and_then(|d| g.pair.dual.normalize(&d));
                c.record(back.as_ref() == Ok(&(i, w.clone())), || {
                    format!("M({m},{n}) sector {i}, word {w:?}: got {back:?}")
                });
            }
        }
    }
    Ok(c.finish())
}

/// Check 10: `Tr_0 o sigma_{i,j} o Tr_0^-1` against `g_j o g_i` on `M(4, 3)`. The substitution side
/// stops at the last complete block, so it must be a prefix of the generated word missing at
/// most one substitution image at the end.
pub fn check_conjugacy(cfg: &VerifyConfig) -> Result<CheckResult> {
    let mut c = CheckResult::new(10, "substitutions conjugate to double generation");
    let (m, n) = (4, 3);
    let g = Generator::new(m, n)?;
    let tables: &SurfaceTables = &g.pair.primal;
    let mut subs = BTreeMap::new();
    for i in 1..n {
        for j in 1..m {
            subs.insert((i, j), substitution(m, n, i, j)?);
        }
    }
    let longest = subs
        .values()
        .flat_map(|s| s.images.values().map(Vec::len))
        .max()
        .unwrap_or(0);
    let mut rng = rng_for(cfg.seed, 10, m, n);
    for k in 0..cfg.conjugacy_words {
        let (i, j) = (1 + k % (n - 1), 1 + (k / (n - 1)) % (m - 1));
        let w = random_admissible_word(tables.t0(), 20, &mut rng);
        let lhs = tables
            .tr_inverse(0, &w)
            .and_then(|a| tables.tr(0, &subs[&(i, j)].apply(&a)))?;
        let rhs = g.to_dual(i, &w).and_then(|u| g.to_primal(j, &u))?;
        let ok = rhs.len() >= lhs.len()
            && rhs[..lhs.len()] == lhs[..]
            && rhs.len() - lhs.len() <= longest + 1;
        c.record(ok, || {
            format!("(i,j)=({i},{j}) word {w:?}: {lhs:?} vs {rhs:?}")
        });
    }
    c.notes
        .push(format!("tail allowance {} letters", longest + 1));
    Ok(c.finish())
}

/// Check 11: Directions recovered from 25-term itineraries.
pub fn check_recognition(cfg: &VerifyConfig) -> Result<CheckResult> {
    let mut c = CheckResult::new(11, "direction recognition");
    for &(m, n) in &cfg.surfaces {
        let mut rng = rng_for(cfg.seed, 11, m, n);
        let mut misses = 0;
        for _ in 0..cfg.recognition_trials {
            let theta = random_direction(&mut rng, n, 0.0, PI);
            let it = match itinerary(m, n, theta, cfg.recognition_terms) {
                Ok(it) => it,
                Err(Error::BoundaryOrbit { .. }) => {
                    c.excluded += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            let got = direction_from_itinerary(m, n, it.b0, &it.pairs, 2.0 * cfg.recognition_tol);
            let err = match &got {
                Ok(t) => (t - theta).abs(),
                Err(Error::NoConvergence { width }) => *width,
                Err(e) => return Err(e.clone()),
            };
            c.deviation(err);
            let ok = got.is_ok() && err <= cfg.recognition_tol;
            misses += usize::from(!ok);
            c.record(ok, || {
                format!(
                    "M({m},{n}) theta={theta}: itinerary {:?} leaves width {err:.3e}",
                    it.pairs
                )
            });
        }
        c.notes.push(format!(
            "M({m},{n}): {misses} of {} directions missed",
            cfg.recognition_trials
        ));
    }
    Ok(c.finish())
}

/// Check 12: Periodic words `(n1 n2)^k` for adjacent pairs, and their renormalization.
pub fn check_fixed_points() -> Result<CheckResult> {
    let mut c = CheckResult::new(12, "periodic fixed points");
    for (m, n) in [(4, 3), (3, 4)] {
        let s = surface(m, n)?;
        let pair = DualPair::new(m, n)?;
        for i in 0..n {
            for (a, b) in build_ti(m, n, i).row_pairs() {
                let w = realize_periodic(&s, a, b, 4)?.labels;
                let periodic = fixed_point_form(&w) == Some((a, b));
                let renorm = pair
                    .primal
                    .normalize(&w)
                    .and_then(|(_, nw)| pair.primal.derive_cyclic(&nw))
                    .and_then(|d| pair.dual.normalize(&d));
                let ok = periodic
                    && matches!(&renorm, Ok((_, d)) if d.len() == w.len() && fixed_point_form(d).is_some());
                c.record(ok, || {
                    format!("M({m},{n}) T_{i} pair ({a},{b}): {w:?} -> {renorm:?}")
                });
            }
        }
    }
    Ok(c.finish())
}
