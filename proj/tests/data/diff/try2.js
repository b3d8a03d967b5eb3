// Twin of try2.njs.
"use strict";
const OUT = [];
function P(x) {
  return (x !== null && (typeof x === "object" || typeof x === "function"))
      ? "[object]" : String(x);
}
function print(x) { OUT.push(P(x)); }

La:
while (true) {
  try {
    break La;
  } finally {
    print("fa");
  }
}
print("done-a");

M:
{
  try {
    try {
      break M;
    } finally {
      print("inner-f");
    }
  } finally {
    print("outer-f");
  }
}

let c = 0;
L2:
while (true) {
  try {
    if (c < 3) throw "again"; else break L2;
  } catch (e4) {
    c = c + 1;
  } finally {
    print("attempt");
  }
}
print(c);

let n = 0;
try {
  while (true) {
    n = n + 1;
    if (2 < n) throw n;
  }
} catch (e5) {
  print(e5);
}

function h() {
  try {
    throw "deep";
  } catch (e6) {
    throw "rethrown";
  } finally {
    print("hf");
  }
}
try {
  h();
} catch (e7) {
  print(e7);
}

process.stdout.write(OUT.map(s => s + "\n").join(""));
