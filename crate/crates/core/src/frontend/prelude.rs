//! Builtin modules loaded into every store.

pub const PRELUDE: &str = r#"
fmod BOOL is
  sort Bool .
  ops true false : -> Bool [ctor] .
  op not_ : Bool -> Bool [prec 53] .
  op _and_ : Bool Bool -> Bool [assoc comm prec 55] .
  op _or_ : Bool Bool -> Bool [assoc comm prec 59] .
  op _xor_ : Bool Bool -> Bool [assoc comm prec 57] .
  op _implies_ : Bool Bool -> Bool [prec 61] .
  op _and-then_ : Bool Bool -> Bool [strat (1 0) prec 55] .
  op _or-else_ : Bool Bool -> Bool [strat (1 0) prec 59] .
  op _==_ : Universal Universal -> Bool [builtin prec 51] .
  op _=/=_ : Universal Universal -> Bool [builtin prec 51] .
  vars A B : Bool .
  eq not true = false .
  eq not false = true .
  eq true and A = A .
  eq false and A = false .
  eq A and A = A .
  eq true or A = true .
  eq false or A = A .
  eq A or A = A .
  eq false xor A = A .
  eq true xor A = not A .
  eq A xor A = false .
  eq A implies B = (not A) or B .
  eq true and-then B = B .
  eq false and-then B = false .
  eq true or-else B = true .
  eq false or-else B = B .
endfm

fmod EXT-BOOL is
  protecting BOOL .
endfm

fmod NAT is
  protecting BOOL .
  sorts Zero NzNat Nat .
  subsort Zero NzNat < Nat .
  op 0 : -> Zero [ctor] .
  op s_ : Nat -> NzNat [ctor builtin prec 15] .
  op _+_ : Nat Nat -> Nat [assoc comm builtin prec 33] .
  op _*_ : Nat Nat -> Nat [assoc comm builtin prec 31] .
  op sd : Nat Nat -> Nat [builtin] .
  ops min max : Nat Nat -> Nat [builtin] .
  ops _quo_ _rem_ : Nat Nat -> Nat [builtin prec 31] .
  ops _<_ _<=_ _>_ _>=_ : Nat Nat -> Bool [builtin prec 37] .
endfm

fmod INT is
  protecting NAT .
  sort Int .
  subsort Nat < Int .
endfm
"#;
