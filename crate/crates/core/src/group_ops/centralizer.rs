use crate::group::PermGroup;
use crate::perm::Permutation;

use super::{intertwiner, orbits};

/// Points of the orbit fixed by the stabilizer of its representative,
/// i.e. the points `b` with `G_a = G_b`.
fn stabilizer_fixed_points(orbit: &super::Orbit) -> Vec<u32> {
    orbit
        .points
        .iter()
        .copied()
        .filter(|&b| orbit.stabilizer.generators().iter().all(|s| s.image(b) == b))
        .collect()
}

/// `C_Sym(n)(G)`, built orbit type by orbit type.
///
/// On one orbit with representative `a`, the equivariant self-maps are the
/// maps `a^x -> b^x` for `b` fixed by `G_a`. Equivalent orbits are permuted
/// among themselves by intertwiners, so each type with `k` orbits
/// contributes a wreath product of order `|Fix(G_a) ∩ orbit|^k * k!`.
pub fn centralizer_in_sym(group: &PermGroup) -> PermGroup {
    let n = group.degree();
    let gens = group.generators();
    let decomposition = orbits(group);
    let mut out: Vec<Permutation> = Vec::new();

    for (k, first) in decomposition.orbits.iter().enumerate() {
        if first.type_key != k {
            continue;
        }
        let a = first.representative;
        for b in stabilizer_fixed_points(first) {
            if b == a {
                continue;
            }
            let map = intertwiner(n, gens, a, b).expect("G_a = G_b gives an equivariant map");
            let mut images: Vec<u32> = (0..n as u32).collect();
            for &c in &first.points {
                images[c as usize] = map[c as usize];
            }
            out.push(Permutation::from_images_unchecked(images));
        }
        for other in decomposition.orbits.iter().filter(|o| o.type_key == k).skip(1) {
            let map = other
                .points
                .iter()
                .find_map(|&b| intertwiner(n, gens, a, b))
                .expect("equivalent orbits admit an intertwiner");
            let mut images: Vec<u32> = (0..n as u32).collect();
            for &c in &first.points {
                let d = map[c as usize];
                images[c as usize] = d;
                images[d as usize] = c;
            }
            out.push(Permutation::from_images_unchecked(images));
        }
    }

    for z in &out {
        for g in gens {
            assert_eq!(z.then(g), g.then(z), "centralizer generator fails to commute");
        }
    }
    PermGroup::new_unchecked(n, out)
}

/// `prod over orbit types of |N_G(G_a)/G_a|^k * k!`.
pub fn centralizer_order_formula(group: &PermGroup) -> u128 {
    let decomposition = orbits(group);
    let mut total = 1u128;
    for (k, first) in decomposition.orbits.iter().enumerate() {
        if first.type_key != k {
            continue;
        }
        let copies = decomposition.orbits.iter().filter(|o| o.type_key == k).count() as u32;
        let local = stabilizer_fixed_points(first).len() as u128;
        total *= local.pow(copies) * (1..=copies as u128).product::<u128>();
    }
    total
}
