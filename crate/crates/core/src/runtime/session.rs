use crate::adversary::Interception;
use crate::error::Result;
use crate::protocol::{chi, ghz, swap, Rounds};

use super::channel::{insert_decoys, measure_decoys, run_check, transmit_qubits};
use super::rng::{RngBank, Stream};
use super::transcript::{Event, EventKind, Transcript, Verdict, TRANSCRIPT_SCHEMA};
use super::{
    BitString, ChannelId, CheckReport, ComparisonInput, Lab, PartyId, ProtocolKind, QubitId,
    SessionConfig,
};

/// Mutable state of one running session: the qubits, the random streams,
/// and the transcript being written.
#[derive(Debug)]
pub struct Session<'a> {
    pub protocol: ProtocolKind,
    pub input: ComparisonInput,
    pub config: &'a SessionConfig,
    pub session_id: u64,
    pub lab: Lab,
    pub rngs: RngBank,
    pub adversary_log: Vec<Interception>,
    events: Vec<Event>,
    warnings: Vec<String>,
}

impl<'a> Session<'a> {
    pub fn new(
        protocol: ProtocolKind,
        input: ComparisonInput,
        config: &'a SessionConfig,
        session_id: u64,
    ) -> Result<Self> {
        let warnings = config.validate(protocol, input.n_bits())?;
        Ok(Self {
            protocol,
            input,
            config,
            session_id,
            lab: Lab::new(),
            rngs: RngBank::new(config.seed, session_id),
            adversary_log: Vec::new(),
            events: Vec::new(),
            warnings,
        })
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn record(&mut self, actor: PartyId, visible: &[PartyId], kind: EventKind) {
        let mut visible_to: Vec<PartyId> = visible.iter().copied().chain([actor]).collect();
        visible_to.sort();
        visible_to.dedup();
        let seq = self.events.len();
        self.events.push(Event {
            seq,
            actor,
            visible_to,
            kind,
        });
    }

    pub fn message(&mut self, from: PartyId, to: &[PartyId], label: &str, bits: BitString) {
        let label = label.to_owned();
        self.record(from, to, EventKind::Message { label, bits });
    }

    pub fn measurement(&mut self, by: PartyId, label: &str, bits: BitString) {
        let label = label.to_owned();
        self.record(by, &[], EventKind::Measurement { label, bits });
    }

    pub fn note(&mut self, by: PartyId, label: &str, bits: BitString) {
        let label = label.to_owned();
        self.record(by, &[], EventKind::Record { label, bits });
    }

    pub fn check(
        &mut self,
        by: PartyId,
        visible: &[PartyId],
        label: &str,
        channels: Vec<ChannelId>,
        report: CheckReport,
    ) {
        let label = label.to_owned();
        self.record(
            by,
            visible,
            EventKind::Check {
                label,
                channels,
                report,
            },
        );
    }

    /// Sends `qubits` over `channel` and logs the transfer.
    pub fn send(
        &mut self,
        channel: ChannelId,
        label: &str,
        qubits: &[QubitId],
    ) -> Result<Vec<QubitId>> {
        self.record(
            channel.from(),
            &[channel.to()],
            EventKind::QubitSend {
                channel,
                label: label.to_owned(),
                qubits: qubits.to_vec(),
            },
        );
        transmit_qubits(
            &mut self.lab,
            channel,
            qubits,
            &self.config.attack,
            self.rngs.get(Stream::Eve(channel)),
            &mut self.adversary_log,
        )
    }

    /// Decoy-protected transfer: the sender mixes in decoys, sends, reveals
    /// positions and bases, the receiver measures and reports, and the sender
    /// runs the check. Returns the payload qubits as received.
    pub fn send_with_decoys(
        &mut self,
        channel: ChannelId,
        label: &str,
        payload: &[QubitId],
        d: usize,
    ) -> Result<(Vec<QubitId>, CheckReport)> {
        let (sender, receiver) = (channel.from(), channel.to());
        let (augmented, record) = insert_decoys(
            &mut self.lab,
            sender,
            payload,
            d,
            self.rngs.get(Stream::Prepare(sender)),
        );
        let received = self.send(channel, label, &augmented)?;
        let announcement = record.announcement();
        self.record(
            sender,
            &[receiver],
            EventKind::Announce {
                label: format!("decoy_positions:{label}"),
                announcement: announcement.clone(),
            },
        );
        let (outcomes, kept) = measure_decoys(
            &mut self.lab,
            receiver,
            &received,
            &announcement,
            self.rngs.get(Stream::Measure(receiver)),
        )?;
        self.message(
            receiver,
            &[sender],
            &format!("decoy_outcomes:{label}"),
            BitString::from_bits(outcomes.iter().copied()),
        );
        let report = run_check(
            &record,
            &announcement,
            &outcomes,
            self.config.check_threshold,
        )?;
        self.check(
            sender,
            &[receiver],
            &format!("decoy_check:{label}"),
            vec![channel],
            report.clone(),
        );
        Ok((kept, report))
    }

    /// Closes the session: TP announces `result` to both players.
    pub fn finish(mut self, result: Verdict) -> Transcript {
        self.record(
            PartyId::Tp,
            &[PartyId::Alice, PartyId::Bob],
            EventKind::Verdict { result },
        );
        let n_bits = self.input.n_bits();
        Transcript {
            schema: TRANSCRIPT_SCHEMA.to_owned(),
            session_id: self.session_id,
            protocol: self.protocol,
            n_bits,
            x_hex: self.input.x_bits().to_hex(),
            y_hex: self.input.y_bits().to_hex(),
            config: self.config.clone(),
            warnings: self.warnings,
            events: self.events,
            result,
            adversary_log: self.adversary_log,
        }
    }
}

/// A finished session together with the per-round values behind it.
#[derive(Clone, Debug)]
pub struct SessionOutcome {
    pub transcript: Transcript,
    /// Per-round values; `None` when the session aborted.
    pub rounds: Option<Rounds>,
}

/// Runs one comparison with session id 0.
pub fn run_session(
    protocol: ProtocolKind,
    input: &ComparisonInput,
    config: &SessionConfig,
) -> Result<Transcript> {
    Ok(run_session_detailed(protocol, input, config, 0)?.transcript)
}

/// Runs one comparison under an explicit session id.
pub fn run_session_with_id(
    protocol: ProtocolKind,
    input: &ComparisonInput,
    config: &SessionConfig,
    session_id: u64,
) -> Result<Transcript> {
    Ok(run_session_detailed(protocol, input, config, session_id)?.transcript)
}

pub fn run_session_detailed(
    protocol: ProtocolKind,
    input: &ComparisonInput,
    config: &SessionConfig,
    session_id: u64,
) -> Result<SessionOutcome> {
    let session = Session::new(protocol, *input, config, session_id)?;
    match protocol {
        ProtocolKind::Ghz => ghz::run(session),
        ProtocolKind::Chi => chi::run(session),
        ProtocolKind::Swap => swap::run(session),
    }
}
