"""Built-in input: a two-object blocks world plus three structural models.

The same text ships as ``blocks.act`` at the repository root for command-line
use; the self-test runs from this embedded copy so it needs no files.
"""

from __future__ import annotations

BLOCKS_SOURCE = """\
// Two blocks C and D.  Picking up needs a free object, dropping/quenching
// need a held one, and repairing needs a held broken one.  Dropping a
// fragile object breaks it; quenching makes it fragile for good.

domain {
  objects: C, D;
  fluents: Holding/1, Broken/1, Fragile/1;
  actions: pickup/1, drop/1, quench/1, repair/1;
}

poss pickup(x): !Holding(x);
poss drop(x): Holding(x);
poss quench(x): Holding(x);
poss repair(x): Holding(x) & Broken(x);

ssa Holding(x): a = pickup(x) | a != drop(x) & Holding(x);
ssa Broken(x): a = drop(x) & Fragile(x) | a != repair(x) & Broken(x);
ssa Fragile(x): a = quench(x) | Fragile(x);

init closed {
  Fragile(C);
  !Fragile(D);
  forall x. !Holding(x);
  !Broken(C);
  !Broken(D);
}

goal brokenC: Broken(C);
goal brokenD: Broken(D);
goal brokenEither: Broken(C) | Broken(D);
goal holdingAny: exists x. Holding(x);
goal holdingEither: Holding(C) | Holding(D);
goal brokenCOrHoldingD: Broken(C) | Holding(D);

narrative breakAndPick: pickup(C); drop(C); pickup(D);
narrative bothPicked: pickup(C); pickup(D);
narrative breakBoth: pickup(C); drop(C); pickup(D); quench(D); drop(D);

// A forest fire started by a dropped match or by lightning.
hpmodel forestFireDisjunctive {
  exo: UMD, UL;
  endo: MD, L, FF;
  eq MD: UMD;
  eq L: UL;
  eq FF: MD | L;
  context bothActive: UMD = true, UL = true;
}

// Variant where both the match and the lightning are needed.
hpmodel forestFireConjunctive {
  exo: UMD, UL;
  endo: MD, L, FF;
  eq MD: UMD;
  eq L: UL;
  eq FF: MD & L;
  context bothActive: UMD = true, UL = true;
}

// Two pickups compete for a disjunctive goal; the PCG/PDG layer encodes
// that the first one preempts the second.
hpmodel pickupPreemption {
  exo: UPC, UPD;
  endo: PC, PD, PCG, PDG, GL;
  eq PC: UPC;
  eq PD: UPD;
  eq PCG: PC;
  eq PDG: !PCG & PD;
  eq GL: PCG | PDG;
  context bothEnabled: UPC = true, UPD = true;
}
"""
