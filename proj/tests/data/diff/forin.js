// Twin of forin.njs. Keys are kept either purely non-numeric or purely
// ascending indices so both languages agree on enumeration order.
"use strict";
const OUT = [];
function P(x) {
  return (x !== null && (typeof x === "object" || typeof x === "function"))
      ? "[object]" : String(x);
}
function print(x) { OUT.push(P(x)); }

let ks = "", sum = 0;

const o = new Object();
o.b = 1;
o.a = 2;
o.c = 3;
for (const k in o) {
  ks = ks + k + "|";
  sum = sum + o[k];
}
print(ks);
print(sum);

const o2 = new Object();
o2.x = 1;
o2.y = 2;
o2.z = 3;
ks = "";
for (const k in o2) {
  if (k == "x") delete o2.z;
  ks = ks + k + "|";
}
print(ks);

function F() {
  this.p = 99;
  this.own = 1;
}
F.prototype.q = 10;
F.prototype.p = 20;
const inst = new F();
ks = "";
for (const k in inst) ks = ks + k + "|";
print(ks);
print(inst.p);
print(inst.q);

const arr = new Array();
arr.push(10);
arr.push(20);
arr.push(30);
ks = "";
for (const k in arr) ks = ks + k + ":" + String(arr[k]) + "|";
print(ks);

let c = 0;
for (const k in 5) c = c + 1;
for (const k in null) c = c + 1;
for (const k in undefined) c = c + 1;
const empty = new Object();
for (const k in empty) c = c + 1;
print(c);

process.stdout.write(OUT.map(s => s + "\n").join(""));
