// Twin of closures.njs.
"use strict";
const OUT = [];
function P(x) {
  return (x !== null && (typeof x === "object" || typeof x === "function"))
      ? "[object]" : String(x);
}
function print(x) { OUT.push(P(x)); }

function mkCounter() {
  let n = 0;
  return function () { n = n + 1; return n; };
}
const c1 = mkCounter();
const c2 = mkCounter();
print(c1());
print(c1());
print(c2());
print(c1());

function mkAdder(k) {
  return function (x) { return x + k; };
}
const add5 = mkAdder(5);
const add10 = mkAdder(10);
print(add5(3));
print(add10(3));
print(add5(100));

function mkCell() {
  let v = 0;
  const o = new Object();
  o.set = function (x) { v = x; };
  o.get = function () { return v; };
  return o;
}
const g = mkCell();
print(g.get());
g.set(42);
print(g.get());

process.stdout.write(OUT.map(s => s + "\n").join(""));
