use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{break_tie, RuleKind, RuleOutcome, TraceStep};
use crate::profile::Profile;
use crate::AltId;

fn argmax_all(scores: &[u64]) -> Vec<AltId> {
    let best = scores.iter().copied().max().unwrap_or(0);
    (0..scores.len()).filter(|&a| scores[a] == best).collect()
}

fn scored(rule: RuleKind, scores: Vec<u64>) -> RuleOutcome {
    let mut trace = Vec::new();
    let candidates = argmax_all(&scores);
    trace.push(TraceStep::Scores { scores });
    let winner = break_tie(candidates, &mut trace);
    RuleOutcome { winner, rule, trace }
}

/// Borda count: position `r` earns `m − 1 − r` points.
pub fn borda(profile: &Profile) -> RuleOutcome {
    let m = profile.m();
    let mut scores = vec![0u64; m];
    for ranking in profile.rankings() {
        for (r, &a) in ranking.iter().enumerate() {
            scores[a] += (m - 1 - r) as u64;
        }
    }
    scored(RuleKind::Borda, scores)
}

pub fn plurality(profile: &Profile) -> RuleOutcome {
    let mut scores = vec![0u64; profile.m()];
    for ranking in profile.rankings() {
        scores[ranking[0]] += 1;
    }
    scored(RuleKind::Plurality, scores)
}

/// Instant runoff: drop the alternative with fewest first places among those
/// left (lowest id on ties) until one remains.
pub fn irv(profile: &Profile) -> RuleOutcome {
    let m = profile.m();
    let mut alive = vec![true; m];
    let mut trace = Vec::with_capacity(m.saturating_sub(1));
    for _ in 1..m {
        let mut firsts = vec![0usize; m];
        for ranking in profile.rankings() {
            let top = *ranking.iter().find(|&&a| alive[a]).expect("alternatives remain");
            firsts[top] += 1;
        }
        let loser = (0..m)
            .filter(|&a| alive[a])
            .min_by_key(|&a| (firsts[a], a))
            .expect("alternatives remain");
        alive[loser] = false;
        trace.push(TraceStep::Eliminated {
            alt: loser,
            first_places: firsts[loser],
        });
    }
    let winner = alive.iter().position(|&x| x).expect("one survivor");
    RuleOutcome {
        winner,
        rule: RuleKind::Irv,
        trace,
    }
}

/// Schulze with winning votes: a direct link `i → j` has strength `d[i][j]`
/// when `i` beats `j` head to head and 0 otherwise; path strengths are
/// widest paths.
pub fn schulze(profile: &Profile) -> RuleOutcome {
    let m = profile.m();
    let mut d = vec![vec![0u64; m]; m];
    for ranking in profile.rankings() {
        for (r, &a) in ranking.iter().enumerate() {
            for &b in &ranking[r + 1..] {
                d[a][b] += 1;
            }
        }
    }
    let mut p = vec![vec![0u64; m]; m];
    for i in 0..m {
        for j in 0..m {
            if i != j && d[i][j] > d[j][i] {
                p[i][j] = d[i][j];
            }
        }
    }
    for k in 0..m {
        for i in 0..m {
            if i == k {
                continue;
            }
            for j in 0..m {
                if j != i && j != k {
                    let via = p[i][k].min(p[k][j]);
                    if via > p[i][j] {
                        p[i][j] = via;
                    }
                }
            }
        }
    }
    let candidates: Vec<AltId> = (0..m)
        .filter(|&i| (0..m).all(|j| j == i || p[i][j] >= p[j][i]))
        .collect();
    let mut trace = Vec::new();
    let winner = break_tie(candidates, &mut trace);
    RuleOutcome {
        winner,
        rule: RuleKind::Schulze,
        trace,
    }
}

/// Uniformly random alternative, seeded.
pub fn random_winner(profile: &Profile, seed: u64) -> RuleOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chosen = rng.gen_range(0..profile.m());
    RuleOutcome {
        winner: chosen,
        rule: RuleKind::Random,
        trace: vec![TraceStep::Draw { chosen }],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hand_profile() -> Profile {
        // a=0, b=1, c=2: a≻b≻c, a≻c≻b, b≻c≻a
        Profile::new(vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 2, 0]]).unwrap()
    }

    #[test]
    fn hand_tally() {
        let p = hand_profile();
        let b = borda(&p);
        assert_eq!(b.winner, 0);
        assert_eq!(b.trace[0], TraceStep::Scores { scores: vec![4, 3, 2] });
        assert_eq!(plurality(&p).winner, 0);
        let i = irv(&p);
        assert_eq!(i.winner, 0);
        assert_eq!(
            i.trace[0],
            TraceStep::Eliminated {
                alt: 2,
                first_places: 0
            }
        );
        assert_eq!(schulze(&p).winner, 0);
    }

    #[test]
    fn schulze_finds_condorcet_winner() {
        // 1 beats 0 and 2 pairwise although 0 wins plurality.
        let p = Profile::new(vec![
            vec![0, 1, 2],
            vec![0, 1, 2],
            vec![1, 2, 0],
            vec![2, 1, 0],
            vec![1, 0, 2],
        ])
        .unwrap();
        assert_eq!(schulze(&p).winner, 1);
        assert_eq!(plurality(&p).winner, 0);
    }

    #[test]
    fn schulze_condorcet_cycle() {
        // 0≻1≻2, 1≻2≻0, 2≻0≻1 with weights 3, 2, 2: every pair wins 5–2 or 4–3.
        let mut rankings = vec![vec![0, 1, 2]; 3];
        rankings.extend(vec![vec![1, 2, 0]; 2]);
        rankings.extend(vec![vec![2, 0, 1]; 2]);
        let p = Profile::new(rankings).unwrap();
        // d[0][1]=5, d[1][2]=5, d[2][0]=4: the weakest link 2→0 is ignored.
        assert_eq!(schulze(&p).winner, 0);
    }

    #[test]
    fn ties_go_to_lowest_id() {
        let p = Profile::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(borda(&p).winner, 0);
        assert_eq!(plurality(&p).winner, 0);
        assert_eq!(schulze(&p).winner, 0);
        // IRV drops 0 first on the tie, leaving 1.
        assert_eq!(irv(&p).winner, 1);
    }

    #[test]
    fn random_is_seeded() {
        let p = hand_profile();
        assert_eq!(random_winner(&p, 9), random_winner(&p, 9));
        let winners: std::collections::BTreeSet<AltId> = (0..50).map(|s| random_winner(&p, s).winner).collect();
        assert_eq!(winners.len(), 3);
    }
}
