//! One line per acceptance criterion over the bundled corpus.

use std::io::Write;
use std::time::Instant;

use exder::corpus::Corpus;
use exder::homotopy::{cap_sensitivity_records, cocontinuity_records, homotopy_records, universality_records};
use exder::kan::{asymmetry_records, distributivity_records, kan_records, pi0_records, verify_derivator_axioms};
use exder::setoid::DEFAULT_CAP;
use exder::truncation::{counit_records, equiv_check, equiv_instances, oracle_agreement, locality_chain, Theory};
use exder::verdict::Record;

type Criterion = (&'static str, Box<dyn Fn(&Corpus) -> Outcome>);

struct Outcome {
    holds: bool,
    summary: String,
}

fn tally(records: &[Record]) -> Outcome {
    let bad: Vec<&Record> = records.iter().filter(|r| !r.holds).collect();
    let mut summary = format!("{} records, {} failed", records.len(), bad.len());
    for r in bad.iter().take(3) {
        summary.push_str(&format!("; {} {}: {}", r.check, r.instance, r.detail));
    }
    Outcome { holds: !records.is_empty() && bad.is_empty(), summary }
}

fn equiv_oracle(c: &Corpus) -> Outcome {
    let inst = equiv_instances(c);
    let mut records = Vec::new();
    for t in Theory::ALL {
        for (n, p) in &inst {
            let (ok, d) = oracle_agreement(c, t, p);
            records.push(Record::from_bool(format!("oracle-{}", t), n.as_str(), ok, d));
            if t == Theory::Contr {
                records.push(Record::new("contr", n.as_str(), &equiv_check(t, p)));
            }
        }
    }
    let find = |name: &str| &inst.iter().find(|(n, _)| n == name).expect("anchor instance").1;
    let anchors = [
        ("PAIR_ONE/ONE", Theory::Sex, true),
        ("DISC2_ONE/ONE", Theory::Pos, true),
        ("DISC2_ONE/ONE", Theory::Prop, true),
        ("DISC2_ONE/ONE", Theory::Set, false),
    ];
    for (n, t, expect) in anchors {
        let v = equiv_check(t, find(n));
        records.push(Record::from_bool(format!("anchor-{}", t), n, v.holds == expect, v.note));
    }
    tally(&records)
}

fn locality(c: &Corpus) -> Outcome {
    let records: Vec<Record> = equiv_instances(c)
        .iter()
        .map(|(n, p)| {
            let (ok, d) = locality_chain(p);
            Record::from_bool("locality", n.as_str(), ok, d)
        })
        .collect();
    tally(&records)
}

fn universality(c: &Corpus) -> Outcome {
    let mut records = universality_records(c, &Theory::REFLECTIVE, DEFAULT_CAP);
    records.extend(counit_records(c));
    tally(&records)
}

fn distributive_cocontinuous(c: &Corpus) -> Outcome {
    let mut records = distributivity_records(c);
    records.extend(cocontinuity_records(c, 4));
    let caps = cap_sensitivity_records(c, 4, 6);
    let compared = caps.len();
    records.extend(caps);
    let mut o = tally(&records);
    o.summary.push_str(&format!("; {} instances compared at caps 4 and 6", compared));
    o.holds &= compared > 0;
    o
}

#[test]
fn acceptance_criteria() {
    let c = Corpus::default_corpus();
    let criteria: Vec<Criterion> = vec![
        ("derivator axioms", Box::new(|c| tally(&verify_derivator_axioms(c)))),
        ("comma path agrees with fast path", Box::new(|c| tally(&kan_records(c)))),
        ("quotient of the colimit of the point is pi0", Box::new(|c| tally(&pi0_records(c)))),
        ("equivalence checks agree with the oracle", Box::new(equiv_oracle)),
        ("locality chain", Box::new(locality)),
        ("homotopy equalities", Box::new(|c| tally(&homotopy_records(c, DEFAULT_CAP)))),
        ("universality, naturality and counits", Box::new(universality)),
        ("distributivity and cocontinuity", Box::new(distributive_cocontinuous)),
        ("reflection asymmetry", Box::new(|c| tally(&asymmetry_records(c)))),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr();
    writeln!(err).unwrap();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f(&c);
        let verdict = if o.holds { "pass" } else { "fail" };
        writeln!(err, "criterion {}\t{}\t{}\t{} ({:.1}s)", i + 1, verdict, name, o.summary, start.elapsed().as_secs_f64()).unwrap();
        if !o.holds {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "criteria failing: {:?}", failed);
}
