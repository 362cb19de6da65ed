//! End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero
//! exit if any fails.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet};
use std::process::ExitCode;
use std::time::Instant;

use permdeg_core::elements::{Bits, ElementTable};
use permdeg_core::group_ops::{centralizer_in_sym, core};
use permdeg_core::iso::find_isomorphism;
use permdeg_core::mindeg::{is_minimally_embedded, mu, EmbeddingTest};
use permdeg_core::subgroups::{
    brute_force_subgroups, conjugacy_class_bits, sym_subgroup_classes, EnumOptions, SubgroupClass,
};
use permdeg_core::{make_named, NamedKind, PermGroup, Permutation};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde_json::Value;

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let argv = std::iter::once("permdeg").chain(args.iter().copied());
    let code = permdeg::run_with(argv, &mut out);
    (code, String::from_utf8(out).expect("utf-8 output"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn survey_json(m: usize, cache: &str) -> Result<(String, Value), String> {
    let (code, out) = cli(&["survey", "-m", &m.to_string(), "--json", "--cache", cache]);
    ensure(code == 0, || format!("survey -m {m} exited {code}"))?;
    let v: Value = serde_json::from_str(&out).map_err(|e| format!("survey -m {m}: bad json: {e}"))?;
    Ok((out, v))
}

fn ind_multiset(v: &Value) -> BTreeMap<u64, u64> {
    v["ind_multiset"]
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, n)| (k.parse().unwrap(), n.as_u64().unwrap()))
        .collect()
}

fn check_survey(m: usize, cache: &str, count: u64, expected: &[(u64, u64)]) -> Check {
    let (_, v) = survey_json(m, cache)?;
    let got = ind_multiset(&v);
    let want: BTreeMap<u64, u64> = expected.iter().copied().collect();
    ensure(v["minemb_count"] == count, || format!("{} classes, expected {count}", v["minemb_count"]))?;
    ensure(got == want, || format!("ind {got:?}, expected {want:?}"))?;
    ensure(v["comp_nonempty"] == false, || "comp is nonempty".into())?;
    Ok(format!("{count} classes, ind {got:?}, comp []"))
}

fn verify_seven(cache: &str) -> Check {
    let (code, out) = cli(&["verify", "--max", "7", "--cache", cache]);
    ensure(code == 0, || format!("exit {code}"))?;
    let expected = [
        (5, "7 minimally embedded, ind {1: 7}, comp []"),
        (6, "18 minimally embedded, ind {1: 18}, comp []"),
        (7, "29 minimally embedded, ind {1: 28, 2: 1}, comp []"),
    ];
    for (m, tail) in expected {
        let line = out
            .lines()
            .find(|l| l.starts_with(&format!("m={m}:")))
            .ok_or_else(|| format!("no summary for m={m}"))?;
        ensure(line.ends_with(tail), || format!("got {line:?}"))?;
    }
    ensure(out.lines().all(|l| !l.starts_with("m=") || l.ends_with("comp []")), || "comp nonempty".into())?;
    Ok("7 / 18 / 29 classes, single ind 2 at m=7, comp [] throughout".into())
}

fn witness() -> Check {
    let (code, out) = cli(&["witness"]);
    ensure(code == 0, || format!("exit {code}"))?;
    for needle in ["order: 1920", "mu(G): 10", "order of <G, z>: 3840", "10 < 12 = mu(G) + mu(C2)"] {
        ensure(out.contains(needle), || format!("missing {needle:?}"))?;
    }
    let z = out
        .lines()
        .find_map(|l| l.strip_prefix("centralizing involution outside G: "))
        .ok_or("no involution printed")?;
    Ok(format!("|G| = 1920, mu = 10, z = {z}, 10 < 12"))
}

fn ind_one_or_even(cache: &str) -> Check {
    let mut seen = 0;
    for m in 2..=9 {
        let (_, v) = survey_json(m, cache)?;
        for c in v["classes"].as_array().unwrap() {
            let ind = c["ind"].as_u64().unwrap();
            ensure(ind == 1 || ind % 2 == 0, || format!("m={m} class {}: ind {ind}", c["class_id"]))?;
            seen += 1;
        }
    }
    Ok(format!("{seen} values over m = 2..9"))
}

fn deterministic(cache: &str) -> Check {
    let (a, _) = survey_json(6, cache)?;
    let (b, _) = survey_json(6, cache)?;
    ensure(a == b, || "outputs differ".into())?;
    Ok(format!("{} identical bytes", a.len()))
}

fn sym_classes(m: usize) -> Vec<SubgroupClass> {
    sym_subgroup_classes(m, &EnumOptions::default()).unwrap()
}

fn lattice_counts() -> Check {
    for (m, n_classes, n_subgroups) in [(3, 4, 6), (4, 11, 30), (5, 19, 156), (6, 56, 1455)] {
        let (table, all) = brute_force_subgroups(&make_named(NamedKind::Symmetric, m).unwrap()).unwrap();
        let reps = sym_classes(m);
        ensure(all.len() == n_subgroups, || format!("brute force Sym({m}): {} subgroups", all.len()))?;
        ensure(reps.len() == n_classes, || format!("Sym({m}): {} classes", reps.len()))?;
        let mut expanded = HashSet::new();
        for c in &reps {
            let conj = conjugacy_class_bits(&table, &table.subgroup_bits(&c.representative.chain()));
            ensure(conj.len() as u128 == c.class_size, || format!("Sym({m}) class {} size", c.class_id))?;
            expanded.extend(conj);
        }
        ensure(expanded == all.into_iter().collect(), || format!("Sym({m}) classes do not cover the lattice"))?;
    }
    Ok("classes 4, 11, 19, 56 and subgroups 6, 30, 156, 1455".into())
}

fn random_group(rng: &mut StdRng) -> PermGroup {
    let n = rng.gen_range(1..=6);
    let gens = (0..rng.gen_range(0..=3))
        .map(|_| {
            let mut v: Vec<u32> = (0..n as u32).collect();
            v.shuffle(rng);
            Permutation::from_images(v).unwrap()
        })
        .collect();
    PermGroup::new(n, gens).unwrap()
}

fn centralizers() -> Check {
    let mut rng = StdRng::seed_from_u64(2024);
    let sym: Vec<Vec<Permutation>> =
        (1..=6).map(|n| make_named(NamedKind::Symmetric, n).unwrap().chain().elements().collect()).collect();
    for i in 0..200 {
        let g = random_group(&mut rng);
        let brute: HashSet<&Permutation> = sym[g.degree() - 1]
            .iter()
            .filter(|x| g.generators().iter().all(|s| s.then(x) == x.then(s)))
            .collect();
        let c = centralizer_in_sym(&g).chain();
        ensure(c.order() == brute.len() as u128, || format!("sample {i}: order {} vs {}", c.order(), brute.len()))?;
        ensure(brute.iter().all(|x| c.contains(x).unwrap()), || format!("sample {i}: element missing"))?;
    }
    Ok("200 random subgroups, n <= 6".into())
}

/// μ by shortest path over intersections of cores of all subgroups.
fn mu_oracle(group: &PermGroup) -> u128 {
    if group.is_trivial() {
        return 0;
    }
    let (table, subs) = brute_force_subgroups(group).unwrap();
    let order = table.len() as u128;
    let steps: Vec<(Bits, u128)> = subs
        .iter()
        .map(|s| {
            let k = core(group, &table.group_of(&table.generators_of(s))).unwrap();
            (table.subgroup_bits(&k.chain()), order / s.count() as u128)
        })
        .collect();
    let full = subs.iter().max_by_key(|s| s.count()).unwrap().clone();
    let mut dist = HashMap::from([(full.clone(), 0u128)]);
    let mut heap = BinaryHeap::from([Reverse((0u128, full))]);
    while let Some(Reverse((d, k))) = heap.pop() {
        if k.count() == 1 {
            return d;
        }
        if dist[&k] < d {
            continue;
        }
        for (c, idx) in &steps {
            let next = k.and(c);
            if dist.get(&next).is_none_or(|&old| d + idx < old) {
                dist.insert(next.clone(), d + idx);
                heap.push(Reverse((d + idx, next)));
            }
        }
    }
    unreachable!("the trivial intersection is always reachable")
}

fn mu_against_oracle() -> Check {
    let mut checked = 0;
    for c in sym_classes(6).iter().filter(|c| c.order <= 100) {
        let fast = mu(&c.representative).map_err(|e| e.to_string())?.value;
        let slow = mu_oracle(&c.representative);
        ensure(fast == slow, || format!("class {}: {fast} vs {slow}", c.class_id))?;
        checked += 1;
    }
    Ok(format!("{checked} classes of order <= 100"))
}

fn embedding_tests() -> Check {
    let mut checked = 0;
    for m in [5, 6] {
        let lower = sym_classes(m - 1);
        for c in sym_classes(m) {
            let a = is_minimally_embedded(&c.representative, EmbeddingTest::IsoFilter { lower: &lower });
            let b = is_minimally_embedded(&c.representative, EmbeddingTest::DirectMu);
            let (a, b) = (a.map_err(|e| e.to_string())?, b.map_err(|e| e.to_string())?);
            ensure(a == b, || format!("Sym({m}) class {}: {a} vs {b}", c.class_id))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} classes of Sym(5) and Sym(6)"))
}

/// Searches all generator images in `h`; a Cayley-graph walk that never
/// meets a conflict and hits every element is an isomorphism.
fn iso_oracle(g: &PermGroup, h: &PermGroup) -> bool {
    let (tg, th) = (ElementTable::new(g).unwrap(), ElementTable::new(h).unwrap());
    if tg.len() != th.len() {
        return false;
    }
    let gens = tg.generator_indices();
    let choices: Vec<Vec<u32>> = gens
        .iter()
        .map(|&s| (0..th.len() as u32).filter(|&x| th.order(x) == tg.order(s)).collect())
        .collect();
    let mut pick = vec![0usize; gens.len()];
    loop {
        if choices.iter().any(Vec::is_empty) {
            return false;
        }
        let images: Vec<u32> = pick.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
        if extends(&tg, &th, &gens, &images) {
            return true;
        }
        let mut k = 0;
        while k < pick.len() {
            pick[k] += 1;
            if pick[k] < choices[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
        if k == pick.len() {
            return false;
        }
    }
}

fn extends(tg: &ElementTable, th: &ElementTable, gens: &[u32], images: &[u32]) -> bool {
    let mut phi = vec![u32::MAX; tg.len()];
    phi[tg.identity() as usize] = th.identity();
    let mut stack = vec![tg.identity()];
    while let Some(x) = stack.pop() {
        for (&s, &t) in gens.iter().zip(images) {
            let (y, fy) = (tg.mul(x, s), th.mul(phi[x as usize], t));
            match phi[y as usize] {
                u32::MAX => {
                    phi[y as usize] = fy;
                    stack.push(y);
                }
                old if old != fy => return false,
                _ => {}
            }
        }
    }
    phi.iter().collect::<HashSet<_>>().len() == th.len()
}

fn iso_against_oracle() -> Check {
    let groups: Vec<PermGroup> = (4..=6)
        .flat_map(|m| sym_classes(m).into_iter().filter(|c| c.order <= 24))
        .map(|c| PermGroup::new(6, c.representative.generators().iter().map(|p| p.extend(6)).collect()).unwrap())
        .collect();
    let (mut pairs, mut iso) = (0, 0);
    for (i, a) in groups.iter().enumerate() {
        for b in &groups[i..] {
            if a.order() != b.order() {
                continue;
            }
            let fast = find_isomorphism(a, b).map_err(|e| e.to_string())?;
            if let Some(cert) = &fast {
                ensure(cert.verify(a, b), || format!("bad certificate for {a:?} and {b:?}"))?;
            }
            let slow = iso_oracle(a, b);
            ensure(fast.is_some() == slow, || format!("{a:?} vs {b:?}: search {} oracle {slow}", fast.is_some()))?;
            pairs += 1;
            iso += slow as usize;
        }
    }
    Ok(format!("{pairs} equal-order pairs, {iso} isomorphic"))
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temporary cache directory");
    let cache = dir.path().to_str().expect("utf-8 temp path").to_string();
    let criteria: Vec<Criterion> = vec![
        ("1  verify --max 7", Box::new(|| verify_seven(&cache))),
        ("2  survey -m 8", Box::new(|| check_survey(8, &cache, 107, &[(1, 102), (2, 4), (4, 1)]))),
        ("3  survey -m 9", Box::new(|| check_survey(9, &cache, 129, &[(1, 126), (2, 3)]))),
        ("4  witness", Box::new(witness)),
        ("5a subgroup lattices vs brute force", Box::new(lattice_counts)),
        ("5b centralizer vs brute force", Box::new(centralizers)),
        ("5c mu vs exhaustive oracle", Box::new(mu_against_oracle)),
        ("5d iso filter vs direct mu", Box::new(embedding_tests)),
        ("5e isomorphism vs bijection search", Box::new(iso_against_oracle)),
        ("6  ind is 1 or even for m <= 9", Box::new(|| ind_one_or_even(&cache))),
        ("7  survey -m 6 is deterministic", Box::new(|| deterministic(&cache))),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS  {name:<38} {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name:<38} {detail} ({secs:.1}s)");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
