//! The table machinery that locates every inversion left after an h-sort
//! followed by a g-sort: Y and J tables, H-sets, Q counters, and direct
//! verifiers for the list-difference identity and its corollary.

use crate::core_model::{stride_sort, KeyArray};
use crate::{gcd, Error, Result};

/// `y[k][l]` = number of positions `k' ≡ k (mod h)` whose key is below the
/// key at position `l` of the original array.
#[derive(Debug, Clone)]
pub struct YTable {
    pub h: u64,
    pub y: Vec<Vec<u32>>,
}

/// `j[k][l] = (k mod h + h·y[k][l]) mod g`; entry `j[l mod h][l]` is the
/// list that the key at position `l` lands in after g-sorting.
#[derive(Debug, Clone)]
pub struct JTable {
    pub h: u64,
    pub g: u64,
    pub j: Vec<Vec<u32>>,
}

impl JTable {
    /// The g-sorted list index of the element at original position `l`.
    pub fn home_list(&self, l: usize) -> u32 {
        self.j[l % self.h as usize][l]
    }
}

/// The residues stepped through when counting from list `j` to list `j'`
/// by increments of `h` modulo `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HSet {
    pub j: u64,
    pub j_prime: u64,
    pub d: u64,
    pub members: Vec<u64>,
}

impl HSet {
    pub fn contains(&self, residue: u64) -> bool {
        self.members.contains(&residue)
    }
}

fn check_coprime(h: u64, g: u64) -> Result<()> {
    if h == 0 || g == 0 {
        return Err(Error::InvalidArgument("h and g must be positive".into()));
    }
    if gcd(h, g) != 1 {
        return Err(Error::InvalidArgument(format!(
            "h={h} and g={g} must be relatively prime"
        )));
    }
    Ok(())
}

/// Builds the Y and J tables of the array for increments `(h, g)`.
pub fn build_tables(a: &KeyArray, h: u64, g: u64) -> Result<(YTable, JTable)> {
    check_coprime(h, g)?;
    let n = a.len();
    let hu = h as usize;
    // Per-residue sorted key lists; Y entries come from binary search.
    let mut class_keys: Vec<Vec<u32>> = vec![Vec::new(); hu];
    for (pos, &key) in a.keys().iter().enumerate() {
        class_keys[pos % hu].push(key);
    }
    for keys in &mut class_keys {
        keys.sort_unstable();
    }
    let mut y = vec![vec![0u32; n]; hu];
    let mut j = vec![vec![0u32; n]; hu];
    for k in 0..hu {
        for l in 0..n {
            let x = a.keys()[l];
            let below = class_keys[k].partition_point(|&v| v < x) as u32;
            y[k][l] = below;
            j[k][l] = ((k as u64 + h * below as u64) % g) as u32;
        }
    }
    Ok((YTable { h, y }, JTable { h, g, j }))
}

/// Computes the H-set for the list pair `(j, j')`.
pub fn h_set(j: u64, j_prime: u64, h: u64, g: u64) -> Result<HSet> {
    check_coprime(h, g)?;
    if !(j < j_prime && j_prime < g) {
        return Err(Error::InvalidArgument(format!(
            "require 0 <= j < j' < g, got j={j}, j'={j_prime}, g={g}"
        )));
    }
    let mut members = Vec::new();
    let mut current = j;
    loop {
        current = (current + h) % g;
        members.push(current);
        if current == j_prime {
            break;
        }
    }
    let d = members.len() as u64;
    Ok(HSet {
        j,
        j_prime,
        d,
        members,
    })
}

/// `Q_l` = number of indices `k < h` with `j[k][l]` in the H-set.
pub fn compute_q(jt: &JTable, hs: &HSet) -> Vec<u32> {
    let mut in_h = vec![false; jt.g as usize];
    for &m in &hs.members {
        in_h[m as usize] = true;
    }
    let n = jt.j.first().map_or(0, Vec::len);
    (0..n)
        .map(|l| {
            jt.j
                .iter()
                .filter(|row| in_h[row[l] as usize])
                .count() as u32
        })
        .collect()
}

/// One failed instance of the list-difference identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma1Violation {
    pub j: u64,
    pub j_prime: u64,
    pub l: usize,
    pub s_difference: i64,
    pub q_formula: i64,
}

/// Outcome of checking `S_{jl} - S_{j'l} = Q_l - ⌊hd/g⌋` on one array,
/// plus the corollary check that the Q-formula inversion count between
/// each list pair equals the directly counted value.
#[derive(Debug, Clone)]
pub struct Lemma1Report {
    pub n: usize,
    pub h: u64,
    pub g: u64,
    pub entries_checked: u64,
    pub violation_count: u64,
    /// At most the first 100 violations, to bound report size.
    pub violations: Vec<Lemma1Violation>,
    pub corollary_mismatches: u64,
}

impl Lemma1Report {
    pub fn is_clean(&self) -> bool {
        self.violation_count == 0 && self.corollary_mismatches == 0
    }
}

const MAX_REPORTED_VIOLATIONS: usize = 100;

/// Checks the identity on every pair `j < j'` and every position `l`,
/// computing `S_{jl}` directly from the g-sorted lists. The identity is
/// the thing under test, so no shortcut through it is taken.
pub fn verify_lemma1(a: &KeyArray, h: u64, g: u64) -> Result<Lemma1Report> {
    check_coprime(h, g)?;
    let (_, jt) = build_tables(a, h, g)?;
    let lists = g_sorted_lists(a, h, g)?;

    let mut report = Lemma1Report {
        n: a.len(),
        h,
        g,
        entries_checked: 0,
        violation_count: 0,
        violations: Vec::new(),
        corollary_mismatches: 0,
    };

    for j in 0..g {
        for j_prime in j + 1..g {
            let hs = h_set(j, j_prime, h, g)?;
            let q = compute_q(&jt, &hs);
            let floor_hd_g = (h * hs.d / g) as i64;
            for (l, &x) in a.keys().iter().enumerate() {
                let s_j = below_in_list(&lists[j as usize], x);
                let s_jp = below_in_list(&lists[j_prime as usize], x);
                let lhs = s_j - s_jp;
                let rhs = q[l] as i64 - floor_hd_g;
                report.entries_checked += 1;
                if lhs != rhs {
                    report.violation_count += 1;
                    if report.violations.len() < MAX_REPORTED_VIOLATIONS {
                        report.violations.push(Lemma1Violation {
                            j,
                            j_prime,
                            l,
                            s_difference: lhs,
                            q_formula: rhs,
                        });
                    }
                }
            }
            let by_formula = cross_list_inversions(a, h, g, j, j_prime)?;
            let direct = direct_cross_list_inversions(a, h, g, j, j_prime)?;
            if by_formula != direct {
                report.corollary_mismatches += 1;
            }
        }
    }
    Ok(report)
}

fn below_in_list(list: &[u32], x: u32) -> i64 {
    list.partition_point(|&v| v < x) as i64
}

/// The g lists of the array after h-sorting then g-sorting, each sorted.
fn g_sorted_lists(a: &KeyArray, h: u64, g: u64) -> Result<Vec<Vec<u32>>> {
    let (h_sorted, _) = stride_sort(a, h as usize)?;
    let (g_sorted, _) = stride_sort(&h_sorted, g as usize)?;
    let mut lists: Vec<Vec<u32>> = vec![Vec::new(); g as usize];
    for (pos, &key) in g_sorted.keys().iter().enumerate() {
        lists[pos % g as usize].push(key);
    }
    Ok(lists)
}

/// Inversions between lists `j` and `j'` of the g-sorted array, by the
/// Q-counter formula `Σ_l |Q_l - ⌊hd/g⌋|·[home(l) = j]`.
pub fn cross_list_inversions(a: &KeyArray, h: u64, g: u64, j: u64, j_prime: u64) -> Result<u64> {
    let hs = h_set(j, j_prime, h, g)?;
    let (_, jt) = build_tables(a, h, g)?;
    let q = compute_q(&jt, &hs);
    let floor_hd_g = (h * hs.d / g) as i64;
    let mut total = 0u64;
    for l in 0..a.len() {
        if jt.home_list(l) as u64 == j {
            total += (q[l] as i64 - floor_hd_g).unsigned_abs();
        }
    }
    Ok(total)
}

/// The same quantity counted pairwise from the g-sorted array itself.
pub fn direct_cross_list_inversions(
    a: &KeyArray,
    h: u64,
    g: u64,
    j: u64,
    j_prime: u64,
) -> Result<u64> {
    if !(j < j_prime && j_prime < g) {
        return Err(Error::InvalidArgument(format!(
            "require 0 <= j < j' < g, got j={j}, j'={j_prime}, g={g}"
        )));
    }
    let (h_sorted, _) = stride_sort(a, h as usize)?;
    let (g_sorted, _) = stride_sort(&h_sorted, g as usize)?;
    let keys = g_sorted.keys();
    let gu = g as usize;
    let mut inv = 0u64;
    for p in 0..keys.len() {
        let cp = p % gu;
        if cp as u64 != j && cp as u64 != j_prime {
            continue;
        }
        for q in p + 1..keys.len() {
            let cq = q % gu;
            if cq == cp || (cq as u64 != j && cq as u64 != j_prime) {
                continue;
            }
            if keys[p] > keys[q] {
                inv += 1;
            }
        }
    }
    Ok(inv)
}

/// Counts elements of the multiset `{0 mod g, …, (h-1) mod g}` belonging
/// to the H-set of `(j, j')`. Always equals `⌊hd/g⌋`.
pub fn multiset_membership_count(j: u64, j_prime: u64, h: u64, g: u64) -> Result<u64> {
    let hs = h_set(j, j_prime, h, g)?;
    let mut in_h = vec![false; g as usize];
    for &m in &hs.members {
        in_h[m as usize] = true;
    }
    Ok((0..h).filter(|&k| in_h[(k % g) as usize]).count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_model::count_inversions;

    fn section1_input() -> KeyArray {
        KeyArray::new(vec![
            3, 14, 15, 92, 65, 35, 89, 79, 32, 38, 46, 26, 43, 37, 31, 78, 50, 28, 84, 19,
        ])
        .unwrap()
    }

    #[test]
    fn y_table_row0_matches_worked_example() {
        let (yt, _) = build_tables(&section1_input(), 5, 3).unwrap();
        assert_eq!(
            yt.y[0],
            vec![0, 1, 1, 4, 3, 1, 4, 4, 1, 2, 2, 1, 2, 2, 1, 3, 3, 1, 4, 1]
        );
    }

    #[test]
    fn j_table_row3_matches_worked_example() {
        let (_, jt) = build_tables(&section1_input(), 5, 3).unwrap();
        assert_eq!(
            jt.j[3],
            vec![0, 0, 0, 0, 1, 2, 0, 1, 0, 1, 1, 0, 1, 2, 0, 1, 1, 0, 1, 0]
        );
    }

    #[test]
    fn y_table_sorted_array_brute_force() {
        let a = KeyArray::identity(23);
        let h = 5u64;
        let (yt, _) = build_tables(&a, h, 3).unwrap();
        for k in 0..h as usize {
            for l in 0..a.len() {
                // definitional count
                let expected = (0..a.len())
                    .filter(|&kp| kp % h as usize == k && a.keys()[kp] < a.keys()[l])
                    .count() as u32;
                assert_eq!(yt.y[k][l], expected);
            }
        }
    }

    #[test]
    fn build_tables_rejects_common_factor() {
        assert!(build_tables(&KeyArray::identity(6), 4, 2).is_err());
    }

    #[test]
    fn h_set_worked_example() {
        let hs = h_set(0, 1, 5, 3).unwrap();
        assert_eq!(hs.d, 2);
        assert_eq!(hs.members, vec![2, 1]);
    }

    #[test]
    fn h_set_single_step() {
        for (h, g) in [(5u64, 3u64), (7, 4), (8, 5), (3, 2)] {
            let jp = h % g;
            if jp > 0 {
                let hs = h_set(0, jp, h, g).unwrap();
                assert_eq!(hs.d, 1);
                assert_eq!(hs.members, vec![jp]);
            }
        }
    }

    #[test]
    fn h_set_by_iteration() {
        let hs = h_set(1, 2, 5, 3).unwrap();
        // j_s = (1 + 5s) mod 3: s=1 -> 0, s=2 -> 2
        assert_eq!(hs.d, 2);
        assert_eq!(hs.members, vec![0, 2]);
        assert!(h_set(2, 1, 5, 3).is_err());
        assert!(h_set(1, 1, 5, 3).is_err());
    }

    #[test]
    fn q_row_matches_worked_example() {
        let (_, jt) = build_tables(&section1_input(), 5, 3).unwrap();
        let hs = h_set(0, 1, 5, 3).unwrap();
        assert_eq!(
            compute_q(&jt, &hs),
            vec![3, 4, 3, 2, 4, 4, 3, 4, 3, 4, 5, 2, 4, 4, 2, 3, 4, 3, 4, 3]
        );
    }

    #[test]
    fn q_definitional_recount() {
        let a = KeyArray::new(vec![7, 2, 9, 0, 5, 11, 3, 8, 1, 10, 4, 6]).unwrap();
        let (h, g) = (4u64, 3u64);
        let (_, jt) = build_tables(&a, h, g).unwrap();
        for j in 0..g {
            for jp in j + 1..g {
                let hs = h_set(j, jp, h, g).unwrap();
                let q = compute_q(&jt, &hs);
                for l in 0..a.len() {
                    let direct = (0..h as usize)
                        .filter(|&k| hs.contains(jt.j[k][l] as u64))
                        .count() as u32;
                    assert_eq!(q[l], direct);
                }
                // cardinality bound
                assert!(q.iter().all(|&v| v as u64 <= h));
            }
        }
    }

    #[test]
    fn lemma1_holds_on_worked_example() {
        let report = verify_lemma1(&section1_input(), 5, 3).unwrap();
        assert!(report.is_clean(), "{report:?}");
        assert_eq!(report.entries_checked, 3 * 20);
    }

    #[test]
    fn lemma1_trivial_array() {
        let report = verify_lemma1(&KeyArray::identity(1), 5, 3).unwrap();
        assert!(report.is_clean());
    }

    #[test]
    fn cross_list_inversions_worked_example() {
        let a = section1_input();
        assert_eq!(cross_list_inversions(&a, 5, 3, 0, 1).unwrap(), 4);
        assert_eq!(direct_cross_list_inversions(&a, 5, 3, 0, 1).unwrap(), 4);
    }

    #[test]
    fn cross_list_inversions_sorted_input_matches_direct() {
        let a = KeyArray::identity(20);
        for (h, g) in [(5u64, 3u64), (7, 4)] {
            for j in 0..g {
                for jp in j + 1..g {
                    assert_eq!(
                        cross_list_inversions(&a, h, g, j, jp).unwrap(),
                        direct_cross_list_inversions(&a, h, g, j, jp).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn cross_list_pairs_partition_all_inversions() {
        let a = section1_input();
        let (h, g) = (5u64, 3u64);
        let (h_sorted, _) = stride_sort(&a, h as usize).unwrap();
        let (g_sorted, _) = stride_sort(&h_sorted, g as usize).unwrap();
        let total: u64 = (0..g)
            .flat_map(|j| (j + 1..g).map(move |jp| (j, jp)))
            .map(|(j, jp)| cross_list_inversions(&a, h, g, j, jp).unwrap())
            .sum();
        assert_eq!(total, count_inversions(&g_sorted));
    }

    #[test]
    fn multiset_membership_worked_example() {
        // d = 2, count = floor(10/3) = 3
        assert_eq!(multiset_membership_count(0, 1, 5, 3).unwrap(), 3);
    }

    #[test]
    fn h_steps_never_land_back_on_j() {
        // g | hd is impossible for gcd(h,g)=1 and 0 < d < g
        for g in 2..=9u64 {
            for h in 2..=12u64 {
                if gcd(h, g) != 1 {
                    continue;
                }
                for d in 1..g {
                    assert_ne!((h * d) % g, 0);
                }
            }
        }
    }

    #[test]
    fn multiset_membership_exhaustive() {
        for g in 2..=9u64 {
            for h in 2..=12u64 {
                if gcd(h, g) != 1 || h <= g {
                    continue;
                }
                for j in 0..g {
                    for jp in j + 1..g {
                        let hs = h_set(j, jp, h, g).unwrap();
                        assert_eq!(
                            multiset_membership_count(j, jp, h, g).unwrap(),
                            h * hs.d / g,
                            "h={h} g={g} j={j} j'={jp}"
                        );
                    }
                }
            }
        }
    }

    /// Incremental update law: processing elements in increasing order,
    /// Q changes by +[home(l)=j] - [home(l)=j'] at each insertion.
    #[test]
    fn q_incremental_update_law() {
        let a = section1_input();
        let (h, g) = (5u64, 3u64);
        let (_, jt) = build_tables(&a, h, g).unwrap();
        let mut order: Vec<usize> = (0..a.len()).collect();
        order.sort_by_key(|&l| a.keys()[l]);
        for j in 0..g {
            for jp in j + 1..g {
                let hs = h_set(j, jp, h, g).unwrap();
                let q = compute_q(&jt, &hs);
                for w in order.windows(2) {
                    let (l, l_next) = (w[0], w[1]);
                    let home = jt.home_list(l) as u64;
                    let delta = i64::from(home == j) - i64::from(home == jp);
                    assert_eq!(q[l_next] as i64, q[l] as i64 + delta);
                }
            }
        }
    }
}
