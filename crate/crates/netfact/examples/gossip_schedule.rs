//! Schedule the walks of a spanning word set without conflicts.
//!
//! Once a spanning factorization is in hand, every vertex can follow every
//! word simultaneously: at each time step a walk crosses one edge of one
//! factor, and two walks conflict only when they need the same factor at
//! the same time on the same position index. The greedy scheduler assigns
//! each (word, position) pair a time slot so that no factor is requested
//! twice in the same slot, and the verifier re-checks the whole schedule.
//!
//! Run with: cargo run --example gossip_schedule

use netfact::factorize::Factorization;
use netfact::spanfact::{
    find_spanning_factorization, greedy_schedule, verify_schedule, write_schedule_json, SpanSearch,
};

fn main() {
    // Circulant digraph on Z_6 with jumps +1 and +2.
    let n = 6;
    let jump = |j: usize| (0..n).map(|i| (i + j) % n).collect::<Vec<_>>();
    let f = Factorization::new(n, vec![jump(1), jump(2)]).unwrap();
    let g = f.to_digraph().unwrap();

    let sf = match find_spanning_factorization(&g, 10_000) {
        SpanSearch::Found(sf) => *sf,
        other => panic!("expected a spanning factorization, got {:?}", other),
    };

    let schedule = greedy_schedule(sf.wordset());
    verify_schedule(&sf, &schedule).expect("greedy schedules verify");

    println!("words scheduled in T = {} slots", schedule.makespan);
    for a in &schedule.assignments {
        println!(
            "  word {:2}  position {}  factor {}  time {}",
            a.word, a.pos, a.factor, a.time
        );
    }
    println!();
    println!("JSON form:");
    println!("{}", write_schedule_json(&schedule));
}
