//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Run with `cargo test --release --test acceptance`.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use structlim::analysis::{expanding_check, fo1local_equiv, h_out, hall_ratio, ExpanderParams, Fo1Verdict, HoutMode};
use structlim::eval::{pairing, Arity, CompiledFormula};
use structlim::interp::Interpretation;
use structlim::lifts::{hausdorff_distance, lift_hausdorff, lift_stat_set, LiftParams, LiftStatSet};
use structlim::logic::ball_formula;
use structlim::metrics::{ball_distribution, dist_bounds, formula_stat_max, tv_distance, ChainCovering, DistanceBounds};
use structlim::rational::ratio;
use structlim::{Formula, Structure, VertexSet};

/// Per-criterion wall-clock targets.
const INTERP_TIME_LIMIT: Duration = Duration::from_secs(60);
const CYCLE_16_TIME_LIMIT: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: structlim::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

// ------------------------------------------------------------ criterion 1

fn shift(f: &Formula, by: u32) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Rel(name, vars) => Formula::Rel(name.clone(), vars.iter().map(|v| v + by).collect()),
        Formula::Eq(a, b) => Formula::Eq(a + by, b + by),
        Formula::Not(g) => Formula::not(shift(g, by)),
        Formula::And(fs) => Formula::And(fs.iter().map(|g| shift(g, by)).collect()),
        Formula::Or(fs) => Formula::Or(fs.iter().map(|g| shift(g, by)).collect()),
        Formula::Exists(v, g) => Formula::exists(v + by, shift(g, by)),
        Formula::Forall(v, g) => Formula::forall(v + by, shift(g, by)),
    }
}

fn random_combination(rng: &mut ChaCha8Rng, atoms: &[Formula], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return atoms[rng.gen_range(0..atoms.len())].clone();
    }
    match rng.gen_range(0..3) {
        0 => Formula::not(random_combination(rng, atoms, depth - 1)),
        1 => Formula::And(vec![
            random_combination(rng, atoms, depth - 1),
            random_combination(rng, atoms, depth - 1),
        ]),
        _ => Formula::Or(vec![
            random_combination(rng, atoms, depth - 1),
            random_combination(rng, atoms, depth - 1),
        ]),
    }
}

/// Three families: basic, non-basic with a domain formula, and quotients by
/// `psi(x) <-> psi(y)` with relations built from the same `psi`s so that
/// compatibility holds by construction.
fn random_interpretation(rng: &mut ChaCha8Rng) -> Interpretation {
    let source = sig_eu();
    let target = sig_eu();
    let symbols = symbols_of(&source);
    let p = rng.gen_range(1..=2u32);
    let block_eq = Formula::and((1..=p).map(|i| Formula::Eq(i, i + p)).collect());
    let kind = rng.gen_range(0..3);
    let (nu, eta, rho) = if kind < 2 {
        let nu = if kind == 0 { Formula::True } else { random_formula(rng, &symbols, 1, p) };
        let rho = BTreeMap::from([
            ("E".to_string(), random_formula(rng, &symbols, 2, 2 * p)),
            ("U".to_string(), random_formula(rng, &symbols, 2, p)),
        ]);
        (nu, block_eq, rho)
    } else {
        let nu = random_formula(rng, &symbols, 1, p);
        let psis: Vec<Formula> = (0..rng.gen_range(1..=2)).map(|_| random_formula(rng, &symbols, 1, p)).collect();
        let mut parts: Vec<Formula> = psis.iter().map(|psi| Formula::iff(psi.clone(), shift(psi, p))).collect();
        let first_coordinate = rng.gen_bool(0.5);
        if first_coordinate {
            parts.push(Formula::Eq(1, 1 + p));
        }
        let mut atoms_pair: Vec<Formula> = psis.iter().flat_map(|psi| [psi.clone(), shift(psi, p)]).collect();
        if first_coordinate {
            atoms_pair.push(Formula::Eq(1, 1 + p));
        }
        let rho = BTreeMap::from([
            ("E".to_string(), random_combination(rng, &atoms_pair, 2)),
            ("U".to_string(), random_combination(rng, &psis, 2)),
        ]);
        (nu, Formula::and(parts), rho)
    };
    Interpretation::new(source, target, p as usize, nu, eta, rho, kind == 0).expect("valid by construction")
}

fn interpretation_soundness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let target_symbols = symbols_of(&sig_eu());
    let mut triples = 0;
    let mut checks = 0u64;
    while triples < 1000 {
        let interp = random_interpretation(&mut rng);
        let n = rng.gen_range(1..=4);
        let density = rng.gen_range(0.2..0.7);
        let a = random_structure(&mut rng, &sig_eu(), n, density);
        let (image, classes) = match interp.apply_with_classes(&a) {
            Ok(x) => x,
            Err(structlim::Error::EmptyDomain) => continue,
            Err(e) => return Err(format!("apply failed: {e}")),
        };
        let mut phi = random_formula(&mut rng, &target_symbols, 3, 3);
        if phi.free_variables().contains(&3) {
            phi = Formula::exists(3, phi);
        }
        let k = phi.max_free();
        let pulled = lib(interp.transform_formula(&phi))?;
        let compiled = lib(CompiledFormula::new(a.signature(), &pulled))?;
        let members: Vec<(usize, &Vec<usize>)> = classes
            .iter()
            .enumerate()
            .flat_map(|(c, class)| class.iter().map(move |t| (c, t)))
            .collect();
        let combos = members.len().pow(k as u32);
        for code in 0..combos {
            let mut c = code;
            let mut tuple = Vec::new();
            let mut env = BTreeMap::new();
            for v in 1..=k as u32 {
                let (class, member) = members[c % members.len()];
                c /= members.len();
                tuple.extend_from_slice(member);
                env.insert(v, class);
            }
            let source_side = compiled.holds_tuple(&a, &tuple);
            let target_side = naive_holds(&image, &phi, &mut env);
            checks += 1;
            if source_side != target_side {
                return Err(format!(
                    "triple {triples}: phi = {phi}, tuple {tuple:?}: source {source_side}, image {target_side}"
                ));
            }
        }
        triples += 1;
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= INTERP_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("{triples} triples, {checks} tuple checks, {elapsed:.1?}"))
}

// ------------------------------------------------------------ criterion 2

fn pairing_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let symbols = symbols_of(&sig_eu());
    for i in 0..1000 {
        let n = rng.gen_range(1..=5);
        let density = rng.gen_range(0.1..0.8);
        let s = random_structure(&mut rng, &sig_eu(), n, density);
        let f = random_formula(&mut rng, &symbols, 3, 3);
        let g = random_formula(&mut rng, &symbols, 2, 3);
        let p = f.max_free();
        let pf = lib(pairing(&s, &f, Arity::Auto))?;
        let ctx = || format!("pair {i}: {f} on n={n}");

        ensure(pf == naive_pairing(&s, &f, p), || format!("{}: oracle mismatch", ctx()))?;
        for extra in 1..=2 {
            ensure(lib(pairing(&s, &f, Arity::Fixed(p + extra)))? == pf, || format!("{}: padding", ctx()))?;
        }
        let neg = lib(pairing(&s, &Formula::not(f.clone()), Arity::Fixed(p)))?;
        ensure(neg == Q::one() - &pf, || format!("{}: complement", ctx()))?;

        let pp = p.max(g.max_free());
        let at = |h: Formula| lib(pairing(&s, &h, Arity::Fixed(pp)));
        let or = at(Formula::Or(vec![f.clone(), g.clone()]))?;
        let and = at(Formula::And(vec![f.clone(), g.clone()]))?;
        ensure(or == at(f.clone())? + at(g.clone())? - and, || format!("{}: inclusion-exclusion with {g}", ctx()))?;

        let sentence = Formula::exists_all(1..=p as u32, f.clone());
        let ps = lib(pairing(&s, &sentence, Arity::Auto))?;
        let truth = naive_holds(&s, &sentence, &mut BTreeMap::new());
        ensure(ps == if truth { Q::one() } else { Q::zero() }, || format!("{}: sentence value", ctx()))?;
    }
    Ok("1000 pairs".into())
}

// ------------------------------------------------------------ criterion 3

fn with_random_marks(rng: &mut ChaCha8Rng, s: Structure, c: usize) -> Structure {
    if c == 0 {
        return s;
    }
    let n = s.domain_size();
    let marks: Vec<VertexSet> =
        (0..c).map(|_| VertexSet::from_iter(n, (0..n).filter(|_| rng.gen_bool(0.4)))).collect();
    s.with_mark_sets(&marks)
}

fn ball_formula_bridge() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut level_sizes = 0usize;
    for i in 0..200 {
        let r = rng.gen_range(1..=2);
        let c = rng.gen_range(0..=1);
        let pick = |rng: &mut ChaCha8Rng| {
            let n = rng.gen_range(2..=12);
            let g = random_bounded_graph(rng, n, 3, 2 * n);
            with_random_marks(rng, g, c)
        };
        let a = pick(&mut rng);
        let b = pick(&mut rng);
        let da = lib(ball_distribution(&a, r, c))?;
        let db = lib(ball_distribution(&b, r, c))?;
        let tv = lib(tv_distance(&da, &db))?;

        let types: BTreeSet<_> = da.weights().keys().chain(db.weights().keys()).cloned().collect();
        let mut zeta = BTreeMap::new();
        for t in &types {
            zeta.insert(t.clone(), lib(ball_formula(t.ball(), 0, r))?);
        }
        let plus: Vec<Formula> =
            types.iter().filter(|t| da.weight(t) > db.weight(t)).map(|t| zeta[t].clone()).collect();
        let minus: Vec<Formula> =
            types.iter().filter(|t| da.weight(t) < db.weight(t)).map(|t| zeta[t].clone()).collect();
        let mut level: Vec<Formula> = zeta.values().cloned().collect();
        level.push(Formula::or(plus));
        level.push(Formula::or(minus));
        level_sizes += level.len();

        // Each single ball formula must also reproduce its own weight.
        for (t, z) in &zeta {
            let w = lib(pairing(&a, z, Arity::Fixed(1)))?;
            ensure(w == da.weight(t), || format!("instance {i}: weight of a type in A"))?;
        }
        let stat = lib(formula_stat_max(&a, &b, &level))?;
        ensure(stat == tv, || format!("instance {i} (r={r}, c={c}): formula max {stat} vs tv {tv}"))?;
    }
    Ok(format!("200 instances, {level_sizes} ball formulas"))
}

// ------------------------------------------------------------ criterion 4

fn pseudometric_corpus() -> Vec<Structure> {
    let mut v: Vec<Structure> = (3..=12).map(cycle).collect();
    v.extend((2..=10).map(path));
    v.extend((2..=5).map(complete));
    v.push(complete(3).copies(2));
    v.push(cycle(4).copies(2));
    v.push(cycle(3).disjoint_union(&path(3)).unwrap());
    v
}

fn check_pseudometric<T: Clone>(
    name: &str,
    items: &[T],
    dist: &mut dyn FnMut(usize, usize) -> Result<(num_rational::BigRational, num_rational::BigRational), String>,
    rng: &mut ChaCha8Rng,
) -> Result<usize, String> {
    let mut exact_triples = 0;
    for t in 0..50 {
        let i = rng.gen_range(0..items.len());
        let j = rng.gen_range(0..items.len());
        let k = rng.gen_range(0..items.len());
        let (self_lo, self_hi) = dist(i, i)?;
        ensure(self_lo.is_zero() && self_hi.is_zero(), || format!("{name} triple {t}: self-distance"))?;
        let ij = dist(i, j)?;
        ensure(ij == dist(j, i)?, || format!("{name} triple {t}: symmetry ({i},{j})"))?;
        let jk = dist(j, k)?;
        let ik = dist(i, k)?;
        ensure(ik.0 <= &ij.1 + &jk.1, || format!("{name} triple {t}: triangle ({i},{j},{k})"))?;
        if ij.0 == ij.1 && jk.0 == jk.1 && ik.0 == ik.1 {
            exact_triples += 1;
        }
    }
    Ok(exact_triples)
}

fn pseudometrics() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let corpus = pseudometric_corpus();
    let chain = ChainCovering::default();
    let mut memo: BTreeMap<(usize, usize), DistanceBounds> = BTreeMap::new();
    let mut dist = |i: usize, j: usize| {
        let d = match memo.entry((i, j)) {
            std::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::btree_map::Entry::Vacant(e) => e.insert(lib(dist_bounds(&corpus[i], &corpus[j], &chain, 12))?),
        };
        Ok((d.lower.clone(), d.upper.clone()))
    };
    let dist_exact = check_pseudometric("dist", &corpus, &mut dist, &mut rng)?;
    ensure(dist_exact == 50, || format!("only {dist_exact}/50 dist triples had exact values"))?;

    let params = LiftParams::exact(1, 1);
    let stat_sets: Vec<LiftStatSet> = (0..12)
        .map(|_| {
            let n = rng.gen_range(2..=7);
            lift_stat_set(&random_bounded_graph(&mut rng, n, 3, 2 * n), &params)
        })
        .collect::<structlim::Result<_>>()
        .map_err(|e| e.to_string())?;
    let mut h = |i: usize, j: usize| {
        let d = lib(hausdorff_distance(&stat_sets[i], &stat_sets[j]))?;
        Ok((d.clone(), d))
    };
    check_pseudometric("hausdorff", &stat_sets, &mut h, &mut rng)?;
    Ok("50 dist triples (all exact), 50 hausdorff triples".into())
}

// ------------------------------------------------------------ criterion 5

fn unrooted_key(s: &Structure) -> RootedKey {
    (0..s.domain_size()).map(|v| naive_rooted_key(s, v)).min().unwrap_or((0, vec![]))
}

fn component_counts(s: &Structure) -> BTreeMap<RootedKey, usize> {
    let n = s.domain_size();
    let mut seen = vec![false; n];
    let mut counts = BTreeMap::new();
    for v in 0..n {
        if seen[v] {
            continue;
        }
        let d = naive_distances(s, v);
        let comp: Vec<usize> = (0..n).filter(|&u| d[u].is_some()).collect();
        for &u in &comp {
            seen[u] = true;
        }
        *counts.entry(unrooted_key(&s.induced(&comp))).or_insert(0) += 1;
    }
    counts
}

fn proportional(a: &BTreeMap<RootedKey, usize>, b: &BTreeMap<RootedKey, usize>) -> bool {
    let keys: BTreeSet<_> = a.keys().chain(b.keys()).collect();
    let (ta, tb): (usize, usize) = (a.values().sum(), b.values().sum());
    keys.iter().all(|k| a.get(*k).unwrap_or(&0) * tb == b.get(*k).unwrap_or(&0) * ta)
}

fn max_component_diameter(s: &Structure) -> usize {
    (0..s.domain_size())
        .map(|v| naive_distances(s, v).into_iter().flatten().max().unwrap_or(0))
        .max()
        .unwrap_or(0)
}

fn random_component(rng: &mut ChaCha8Rng) -> Structure {
    let n = rng.gen_range(1..=4);
    random_bounded_graph(rng, n, 3, 3 * n)
}

fn union_of(parts: &[&Structure]) -> Structure {
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        out = out.disjoint_union(p).unwrap();
    }
    out
}

fn shuffled(rng: &mut ChaCha8Rng, s: &Structure) -> Structure {
    let mut perm: Vec<usize> = (0..s.domain_size()).collect();
    perm.shuffle(rng);
    s.permute(&perm)
}

fn fo1_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    // Sample of 20 local one-variable formulas: ball formulas of assorted
    // small rooted graphs at radii 0..=2.
    let mut sample = Vec::new();
    while sample.len() < 20 {
        let g = random_component(&mut rng);
        let r = rng.gen_range(0..=2);
        let d = lib(ball_distribution(&g, r, 0))?;
        for t in d.weights().keys() {
            if sample.len() < 20 {
                sample.push(lib(ball_formula(t.ball(), 0, r))?);
            }
        }
    }
    for i in 0..100 {
        let parts: Vec<Structure> = (0..rng.gen_range(1..=2)).map(|_| random_component(&mut rng)).collect();
        let base = union_of(&parts.iter().collect::<Vec<_>>());
        let (ka, kb) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let a = shuffled(&mut rng, &base.copies(ka));
        let b = shuffled(&mut rng, &base.copies(kb));
        let verdict = lib(fo1local_equiv(&a, &b))?;
        ensure(verdict.is_equivalent(), || format!("positive pair {i} rejected: {verdict:?}"))?;
        for f in &sample {
            ensure(lib(pairing(&a, f, Arity::Fixed(1)))? == lib(pairing(&b, f, Arity::Fixed(1)))?, || {
                format!("positive pair {i}: pairing differs on {f}")
            })?;
        }
    }
    let mut rejected = 0;
    while rejected < 100 {
        let pool: Vec<Structure> = (0..3).map(|_| random_component(&mut rng)).collect();
        let pick = |rng: &mut ChaCha8Rng| -> Structure {
            let parts: Vec<&Structure> = (0..rng.gen_range(1..=4)).map(|_| &pool[rng.gen_range(0..3)]).collect();
            union_of(&parts)
        };
        let a = pick(&mut rng);
        let b = pick(&mut rng);
        if proportional(&component_counts(&a), &component_counts(&b)) {
            continue;
        }
        let bound = max_component_diameter(&a).max(max_component_diameter(&b)) + 1;
        match lib(fo1local_equiv(&a, &b))? {
            Fo1Verdict::Distinct { radius } => {
                ensure(radius <= bound, || format!("negative pair {rejected}: radius {radius} > {bound}"))?;
                let da = lib(ball_distribution(&a, radius, 0))?;
                let db = lib(ball_distribution(&b, radius, 0))?;
                ensure(lib(tv_distance(&da, &db))? > Q::zero(), || {
                    format!("negative pair {rejected}: radius {radius} does not separate")
                })?;
            }
            v => return Err(format!("negative pair {rejected} accepted: {v:?}")),
        }
        rejected += 1;
    }
    Ok("100 accepted with 20-formula agreement, 100 rejected".into())
}

// ------------------------------------------------------------ criterion 6

fn shadow_lower_bound() -> Outcome {
    let corpus = [
        ("C3", cycle(3)),
        ("C4", cycle(4)),
        ("C8", cycle(8)),
        ("C12", cycle(12)),
        ("P8", path(8)),
        ("2K3", complete(3).copies(2)),
    ];
    let params = LiftParams::exact(1, 1);
    let mut pairs = 0;
    for (na, a) in &corpus {
        for (nb, b) in &corpus {
            let lifted = lib(lift_hausdorff(a, b, &params))?.value;
            let plain = lib(tv_distance(&lib(ball_distribution(a, 1, 0))?, &lib(ball_distribution(b, 1, 0))?))?;
            ensure(lifted >= plain, || format!("{na} vs {nb}: lifted {lifted} < tv {plain}"))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} ordered pairs"))
}

// ------------------------------------------------------------ criterion 7

fn cycle_local_global() -> Outcome {
    let params = LiftParams::exact(1, 1);
    let mut values = Vec::new();
    let mut report = Vec::new();
    for n in [8, 10, 12, 14, 16] {
        let start = Instant::now();
        let engine = lib(lift_hausdorff(&cycle(n), &cycle(n + 4), &params))?.value;
        let elapsed = start.elapsed();
        if n == 16 {
            ensure(elapsed <= CYCLE_16_TIME_LIMIT, || format!("n=16 took {elapsed:?}"))?;
        }
        if n <= 12 {
            let mut index = BTreeMap::new();
            let la = naive_one_mark_lifts(&cycle(n), 1, &mut index);
            let lb = naive_one_mark_lifts(&cycle(n + 4), 1, &mut index);
            let naive = naive_hausdorff(&la, n, &lb, n + 4);
            ensure(naive == engine, || format!("n={n}: engine {engine}, naive {naive}"))?;
        }
        report.push(format!("{n}:{engine}"));
        values.push(engine);
    }
    ensure(values.windows(2).all(|w| w[1] <= w[0]), || format!("not non-increasing: {}", report.join(" ")))?;
    Ok(report.join(" "))
}

// ------------------------------------------------------------ criterion 8

fn expansion_fixtures() -> Outcome {
    let params = lib(ExpanderParams::new(1, ratio(1, 4), ratio(3, 10)))?;
    let k5 = lib(expanding_check(&complete(5), &params))?;
    ensure(k5.holds, || "K5 not expanding".into())?;

    let p10 = path(10);
    let v = lib(expanding_check(&p10, &params))?;
    ensure(!v.holds, || "P10 reported expanding".into())?;
    let x = v.witness.ok_or("P10 without witness")?;
    let k = x.len() as i64;
    let mut ball: BTreeSet<usize> = x.iter().collect();
    for u in x.iter() {
        for (w, d) in naive_distances(&p10, u).into_iter().enumerate() {
            if d == Some(1) {
                ball.insert(w);
            }
        }
    }
    let measure = q(k, 10);
    ensure(measure > q(1, 4) && measure < q(3, 4), || format!("witness size {k} not eligible"))?;
    ensure(q(ball.len() as i64, 10) <= q(13, 10) * &measure, || "witness does not violate".into())?;

    let k4 = lib(h_out(&complete(4), &HoutMode::Exact))?.value.ok_or("no h_out for K4")?;
    let oracle = naive_h_out(&complete(4)).ok_or("oracle found no subset")?;
    ensure(k4 == ratio(3, 1) && oracle == k4, || format!("h_out(K4) = {k4}, oracle {oracle}"))?;

    let hall = lib(hall_ratio(&cycle(5), structlim::analysis::DEFAULT_NODE_BUDGET))?;
    ensure(hall == ratio(2, 5) && naive_independence(&cycle(5)) == 2, || format!("hall(C5) = {hall}"))?;
    Ok(format!("P10 witness {:?}", x.iter().collect::<Vec<_>>()))
}

// ------------------------------------------------------------ criterion 9

fn cli(threads: usize, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_structlim"))
        .arg("--threads")
        .arg(threads.to_string())
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn write_corpus(dir: &Path) -> Result<Vec<String>, String> {
    let specs = [
        "cycle:3", "cycle:4", "cycle:8", "cycle:12", "path:8", "2*complete:3", "star:6", "grid:3,3",
        "random_regular:10,3,7",
    ];
    let mut files = Vec::new();
    for spec in specs {
        let json = cli(1, &["gen", spec])?;
        let file = dir.join(format!("{}.json", spec.replace([':', ',', '*'], "_")));
        std::fs::write(&file, json).map_err(|e| e.to_string())?;
        files.push(file.to_string_lossy().into_owned());
    }
    Ok(files)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let files = write_corpus(dir.path())?;
    let side = tempfile::tempdir().map_err(|e| e.to_string())?;
    let marked = side.path().join("marked.json");
    let s = cycle(12).with_mark_sets(&[VertexSet::from_iter(12, 0..4)]);
    std::fs::write(&marked, s.to_json_string()).map_err(|e| e.to_string())?;
    let marked = marked.to_string_lossy().into_owned();
    let dir_arg = dir.path().to_string_lossy().into_owned();

    let mut commands: Vec<Vec<String>> = Vec::new();
    let owned = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    for f in &files {
        commands.push(owned(&["validate", "-s", f]));
        commands.push(owned(&["eval", "-s", f, "-f", "exists x3. E(x1,x3) & E(x3,x2)", "--tuples"]));
        commands.push(owned(&["eps-net", "-s", f, "-r", "1", "-c", "1", "--eps", "1/4"]));
        commands.push(owned(&["interpret", "--builtin", "complement:E", "--apply", "-s", f]));
        commands.push(owned(&["expander", "-s", f, "-d", "1", "--eps", "1/4", "--delta", "3/10"]));
        commands.push(owned(&["hout", "-s", f]));
        commands.push(owned(&["hall", "-s", f]));
        for g in &files {
            commands.push(owned(&["dist", "-s", f, "-s", g, "--nmax", "8"]));
            commands.push(owned(&["tv", "-s", f, "-s", g, "-r", "2"]));
            commands.push(owned(&["lift-hausdorff", "-s", f, "-s", g, "-r", "1", "-c", "1"]));
            commands.push(owned(&["equiv", "-s", f, "-s", g]));
        }
    }
    commands.push(owned(&["gen", "random_regular:12,3,9"]));
    commands.push(owned(&["interpret", "--builtin", "shadow", "--transform", "-f", "exists x2. E(x1,x2)", "-s", &marked]));
    commands.push(owned(&["cluster-report", "-s", &marked, "-s", &marked, "--mark", "1", "--dmax", "2", "-f", "E(x1,x2)"]));
    commands.push(owned(&["converge-report", "--dir", &dir_arg, "--nmax", "6", "-r", "1", "-c", "1"]));

    for args in &commands {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let one = cli(1, &args)?;
        let eight = cli(8, &args)?;
        ensure(one == eight, || format!("output differs for {args:?}"))?;
    }
    Ok(format!("{} commands byte-identical", commands.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 interpretation soundness", interpretation_soundness),
        ("2 pairing algebra", pairing_algebra),
        ("3 ball-formula / total-variation bridge", ball_formula_bridge),
        ("4 pseudometric axioms", pseudometrics),
        ("5 FO1-local equivalence", fo1_equivalence),
        ("6 shadow lower bound", shadow_lower_bound),
        ("7 cycle local-global", cycle_local_global),
        ("8 expansion fixtures", expansion_fixtures),
        ("9 thread-count determinism", determinism),
    ];
    let only: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (name, run) in criteria {
        if only.as_ref().is_some_and(|o| !name.contains(o.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS  {name:<42} {detail} [{t:.1?}]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name:<42} {detail} [{t:.1?}]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
