//! Full messaging session: distribute EPR pairs, verify the channel,
//! then send a message over the survivors.
//!
//! Usage: cargo run -p qsdc-core --example qsdc_session [message] [eve]
//! where eve is one of none | intercept-z | intercept-rand.

use qsdc_core::{
    distribute_epr, qsdc_send_message, verify_channel, EveModel, Message, SimRng, Transcript,
    Verdict, VerificationConfig,
};

fn main() {
    let mut args = std::env::args().skip(1);
    let message: Message = args
        .next()
        .unwrap_or_else(|| "00101011".into())
        .parse()
        .expect("message must be a string of 0s and 1s");
    let eve = EveModel::parse(&args.next().unwrap_or_else(|| "none".into()))
        .expect("eve must be none | intercept-z | intercept-rand");

    let mut rng = SimRng::from_seed(7);
    let mut transcript = Transcript::new();
    let cfg = VerificationConfig::default();

    // Sacrificing half the pairs to verification, 2n pairs carry an n-bit
    // message.
    let pairs = distribute_epr(2 * message.len(), eve, &mut rng, &mut transcript);
    let (report, survivors) = verify_channel(pairs, &cfg, &mut rng).expect("nonempty distribution");
    transcript.push(report.to_event());
    println!(
        "verification: {} checked, {} mismatches, qber {:.3}, verdict {}",
        report.pairs_checked, report.mismatches, report.qber_estimate, report.verdict
    );

    if report.verdict == Verdict::TamperingDetected {
        println!("pairs discarded; nothing sent");
        return;
    }

    let result =
        qsdc_send_message(&message, survivors, &mut rng, transcript).expect("enough survivors");
    println!("sent:    {message}");
    println!("decoded: {}", result.decoded);
    let errors = result
        .decoded
        .bits()
        .iter()
        .zip(message.bits())
        .filter(|(a, b)| a != b)
        .count();
    println!("bit errors: {errors}");
}
