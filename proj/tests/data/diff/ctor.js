// Twin of ctor.njs.
"use strict";
const OUT = [];
function P(x) {
  return (x !== null && (typeof x === "object" || typeof x === "function"))
      ? "[object]" : String(x);
}
function print(x) { OUT.push(P(x)); }

function F(a) { this.x = a; }
F.prototype.m = function () { return this.x * 2; };
const o = new F(21);
print(o.x);
print(o.m());

function G() {}
const g = new G();
print(o instanceof F);
print(o instanceof G);
print(g instanceof G);
print(g instanceof F);
print(5 instanceof F);

print(o.constructor === F);
print(F.length);
print(G.length);

function F2() {
  this.a = 1;
  const o2 = new Object();
  o2.b = 2;
  return o2;
}
const r2 = new F2();
print(r2.b);
print(r2.a);

function F3() {
  this.v = 5;
  return 9;
}
const r3 = new F3();
print(r3.v);

function Pr() { this.pp = 1; }
Pr.prototype.pm = 100;
function C() { this.cc = 2; }
C.prototype = new Pr();
const c = new C();
print(c.cc);
print(c.pp);
print(c.pm);
print(c instanceof C);
print(c instanceof Pr);
print(c.constructor === Pr);

o.m = function () { return 7; };
print(o.m());

print("pm" in c);
print(c.hasOwnProperty("pm"));

process.stdout.write(OUT.map(s => s + "\n").join(""));
