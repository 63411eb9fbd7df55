#include <iostream>

class Counter {
public:
    int x;
    Counter() {
        x = 10;
    }
    void f1(int &a) {
        a = a + 1;
        int y = x + a;
        std::cout << y << std::endl;
    }
};
int main() {
    int k = 5;
    Counter c;
    c.f1(k);
    std::cout << k << std::endl;
    return 0;
}
