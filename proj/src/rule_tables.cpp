// Quadrature node/weight tables for the 10-point Gauss-Legendre rule, the
// 20-point rules for log|x_i - x| on [-1,1], and the 24-point rules for
// log(x + xbar) on [0,1] (tabulated in the square-root variable, see
// quadrature.cpp). Values are transcribed digit for digit.

#include "rule_tables.hpp"

namespace axibie::tables {

const std::array<NodeWeight, 10> kGauss10{{
    {-9.739065285171716e-01, 6.667134430868814e-02},
    {-8.650633666889845e-01, 1.494513491505806e-01},
    {-6.794095682990244e-01, 2.190863625159820e-01},
    {-4.333953941292472e-01, 2.692667193099963e-01},
    {-1.488743389816312e-01, 2.955242247147529e-01},
    {1.488743389816312e-01, 2.955242247147529e-01},
    {4.333953941292472e-01, 2.692667193099963e-01},
    {6.794095682990244e-01, 2.190863625159820e-01},
    {8.650633666889845e-01, 1.494513491505806e-01},
    {9.739065285171716e-01, 6.667134430868814e-02},
}};

const std::array<std::array<NodeWeight, 20>, 10> kSingular20{{
  {{
    {-9.981629455677877e-01, 4.550772157144354e-03},
    {-9.915520723139890e-01, 8.062764683328619e-03},
    {-9.832812993252168e-01, 7.845621096866406e-03},
    {-9.767801773920733e-01, 4.375212351185101e-03},
    {-9.717169387169078e-01, 1.021414662954223e-02},
    {-9.510630103726074e-01, 3.157199356768625e-02},
    {-9.075765988474132e-01, 5.592493151946541e-02},
    {-8.382582352569804e-01, 8.310260847601852e-02},
    {-7.408522006801963e-01, 1.118164522164500e-01},
    {-6.147619568252419e-01, 1.401105427713687e-01},
    {-4.615244999958006e-01, 1.657233639623953e-01},
    {-2.849772954295424e-01, 1.863566566231937e-01},
    {-9.117593460489747e-02, 1.999093145144455e-01},
    {1.119089520342051e-01, 2.046841584582030e-01},
    {3.148842536644393e-01, 1.995580161940930e-01},
    {5.075733846631832e-01, 1.841025430283230e-01},
    {6.797470718157004e-01, 1.586456191174843e-01},
    {8.218833662202629e-01, 1.242680229936124e-01},
    {9.258924858821892e-01, 8.273794370795576e-02},
    {9.857595961761246e-01, 3.643931593123844e-02},
  }},
  {{
    {-9.954896691005256e-01, 1.141744473788874e-02},
    {-9.775532683688947e-01, 2.368593568061651e-02},
    {-9.500346715183706e-01, 3.027205199814611e-02},
    {-9.192373372373420e-01, 3.021809354380292e-02},
    {-8.916563772395616e-01, 2.397183723558556e-02},
    {-8.727728136507039e-01, 1.253574079839078e-02},
    {-8.607963163061316e-01, 2.070840476545303e-02},
    {-8.201318720954396e-01, 6.080709508468810e-02},
    {-7.394732321355052e-01, 1.002402801599464e-01},
    {-6.204853512352519e-01, 1.371499151597280e-01},
    {-4.667290485167077e-01, 1.693838059093582e-01},
    {-2.840823320902124e-01, 1.945292086962893e-01},
    {-8.079364608026202e-02, 2.103223087093422e-01},
    {1.328455136645940e-01, 2.149900928447852e-01},
    {3.451233500669768e-01, 2.074984762344433e-01},
    {5.437321547508867e-01, 1.877085225595498e-01},
    {7.167077216635750e-01, 1.564543949958065e-01},
    {8.534299232009863e-01, 1.156104890379952e-01},
    {9.458275339169444e-01, 6.859369195724087e-02},
    {9.912353127269481e-01, 2.390220989094312e-02},
  }},
  {{
    {-9.930122613589740e-01, 1.779185041193254e-02},
    {-9.643941806993207e-01, 3.870503119897836e-02},
    {-9.175869559770760e-01, 5.371120494602663e-02},
    {-8.596474181980754e-01, 6.073467932536858e-02},
    {-7.990442708271941e-01, 5.901993373645797e-02},
    {-7.443700671611690e-01, 4.905519963921684e-02},
    {-7.031684479828371e-01, 3.249237036645046e-02},
    {-6.811221147275545e-01, 1.335394660596527e-02},
    {-6.579449960254029e-01, 4.151626407911676e-02},
    {-5.949471688137100e-01, 8.451456165895121e-02},
    {-4.893032793226841e-01, 1.262522607368499e-01},
    {-3.441659232382107e-01, 1.628408264966550e-01},
    {-1.665388322404095e-01, 1.907085686614375e-01},
    {3.344207582228461e-02, 2.071802230953481e-01},
    {2.434356263087524e-01, 2.105274833603497e-01},
    {4.498696863725133e-01, 2.000282912446872e-01},
    {6.389777518528792e-01, 1.760212445284564e-01},
    {7.978632877793501e-01, 1.399000904426490e-01},
    {9.155180703268415e-01, 9.402669072995991e-02},
    {9.837258757826489e-01, 4.161927873514264e-02},
  }},
  {{
    {-9.903478871133073e-01, 2.462513260640712e-02},
    {-9.504025146897784e-01, 5.449201732062665e-02},
    {-8.834986023815121e-01, 7.799498604905293e-02},
    {-7.974523551287549e-01, 9.241688894090601e-02},
    {-7.022255002503461e-01, 9.619882322938848e-02},
    {-6.087194789244920e-01, 8.902783806614303e-02},
    {-5.275278952351541e-01, 7.181973054766198e-02},
    {-4.677586540799037e-01, 4.663017060126023e-02},
    {-4.360689210457623e-01, 1.794303974050253e-02},
    {-4.121945474875853e-01, 4.061799823415495e-02},
    {-3.494226766911471e-01, 8.507517518447759e-02},
    {-2.425993523586304e-01, 1.277525783357134e-01},
    {-9.646839923908594e-02, 1.628510773009247e-01},
    {7.921243716767302e-02, 1.863323765408308e-01},
    {2.715178194484646e-01, 1.958227701927855e-01},
    {4.658440358656903e-01, 1.903138548150517e-01},
    {6.472213975763533e-01, 1.700731513381802e-01},
    {8.015601619414859e-01, 1.365784674773513e-01},
    {9.168056007307982e-01, 9.239595239693155e-02},
    {9.839468743284722e-01, 4.103797108164931e-02},
  }},
  {{
    {-9.883561797860961e-01, 2.974603958509255e-02},
    {-9.398305159297058e-01, 6.657945456889164e-02},
    {-8.572399919019390e-01, 9.731775484182564e-02},
    {-7.482086250804679e-01, 1.190433988432928e-01},
    {-6.228514167093102e-01, 1.297088242013777e-01},
    {-4.928317114329241e-01, 1.282900896966494e-01},
    {-3.702771193724617e-01, 1.148917968875341e-01},
    {-2.666412108172461e-01, 9.074932908233864e-02},
    {-1.916083010783277e-01, 5.818196361216740e-02},
    {-1.521937160593461e-01, 2.224697059733435e-02},
    {-1.233125650067164e-01, 4.788826761346366e-02},
    {-5.257959675044444e-02, 9.237500180593534e-02},
    {5.877314311857769e-02, 1.287410543031414e-01},
    {2.012559739993003e-01, 1.541960911507042e-01},
    {3.627988191760868e-01, 1.665885274544506e-01},
    {5.297121321076323e-01, 1.648585116745725e-01},
    {6.878399330187783e-01, 1.491408089644010e-01},
    {8.237603202215137e-01, 1.207592726093190e-01},
    {9.259297297557394e-01, 8.212177982524418e-02},
    {9.856881498392895e-01, 3.657506268226379e-02},
  }},
  {{
    {-9.856881498392895e-01, 3.657506268226379e-02},
    {-9.259297297557394e-01, 8.212177982524418e-02},
    {-8.237603202215137e-01, 1.207592726093190e-01},
    {-6.878399330187783e-01, 1.491408089644010e-01},
    {-5.297121321076323e-01, 1.648585116745725e-01},
    {-3.627988191760868e-01, 1.665885274544506e-01},
    {-2.012559739993003e-01, 1.541960911507042e-01},
    {-5.877314311857769e-02, 1.287410543031414e-01},
    {5.257959675044444e-02, 9.237500180593534e-02},
    {1.233125650067164e-01, 4.788826761346366e-02},
    {1.521937160593461e-01, 2.224697059733435e-02},
    {1.916083010783277e-01, 5.818196361216740e-02},
    {2.666412108172461e-01, 9.074932908233864e-02},
    {3.702771193724617e-01, 1.148917968875341e-01},
    {4.928317114329241e-01, 1.282900896966494e-01},
    {6.228514167093102e-01, 1.297088242013777e-01},
    {7.482086250804679e-01, 1.190433988432928e-01},
    {8.572399919019390e-01, 9.731775484182564e-02},
    {9.398305159297058e-01, 6.657945456889164e-02},
    {9.883561797860961e-01, 2.974603958509255e-02},
  }},
  {{
    {-9.839468743284722e-01, 4.103797108164931e-02},
    {-9.168056007307982e-01, 9.239595239693155e-02},
    {-8.015601619414859e-01, 1.365784674773513e-01},
    {-6.472213975763533e-01, 1.700731513381802e-01},
    {-4.658440358656903e-01, 1.903138548150517e-01},
    {-2.715178194484646e-01, 1.958227701927855e-01},
    {-7.921243716767302e-02, 1.863323765408308e-01},
    {9.646839923908594e-02, 1.628510773009247e-01},
    {2.425993523586304e-01, 1.277525783357134e-01},
    {3.494226766911471e-01, 8.507517518447759e-02},
    {4.121945474875853e-01, 4.061799823415495e-02},
    {4.360689210457623e-01, 1.794303974050253e-02},
    {4.677586540799037e-01, 4.663017060126023e-02},
    {5.275278952351541e-01, 7.181973054766198e-02},
    {6.087194789244920e-01, 8.902783806614303e-02},
    {7.022255002503461e-01, 9.619882322938848e-02},
    {7.974523551287549e-01, 9.241688894090601e-02},
    {8.834986023815121e-01, 7.799498604905293e-02},
    {9.504025146897784e-01, 5.449201732062665e-02},
    {9.903478871133073e-01, 2.462513260640712e-02},
  }},
  {{
    {-9.837258757826489e-01, 4.161927873514264e-02},
    {-9.155180703268415e-01, 9.402669072995991e-02},
    {-7.978632877793501e-01, 1.399000904426490e-01},
    {-6.389777518528792e-01, 1.760212445284564e-01},
    {-4.498696863725133e-01, 2.000282912446872e-01},
    {-2.434356263087524e-01, 2.105274833603497e-01},
    {-3.344207582228461e-02, 2.071802230953481e-01},
    {1.665388322404095e-01, 1.907085686614375e-01},
    {3.441659232382107e-01, 1.628408264966550e-01},
    {4.893032793226841e-01, 1.262522607368499e-01},
    {5.949471688137100e-01, 8.451456165895121e-02},
    {6.579449960254029e-01, 4.151626407911676e-02},
    {6.811221147275545e-01, 1.335394660596527e-02},
    {7.031684479828371e-01, 3.249237036645046e-02},
    {7.443700671611690e-01, 4.905519963921684e-02},
    {7.990442708271941e-01, 5.901993373645797e-02},
    {8.596474181980754e-01, 6.073467932536858e-02},
    {9.175869559770760e-01, 5.371120494602663e-02},
    {9.643941806993207e-01, 3.870503119897836e-02},
    {9.930122613589740e-01, 1.779185041193254e-02},
  }},
  {{
    {-9.912353127269481e-01, 2.390220989094312e-02},
    {-9.458275339169444e-01, 6.859369195724087e-02},
    {-8.534299232009863e-01, 1.156104890379952e-01},
    {-7.167077216635750e-01, 1.564543949958065e-01},
    {-5.437321547508867e-01, 1.877085225595498e-01},
    {-3.451233500669768e-01, 2.074984762344433e-01},
    {-1.328455136645940e-01, 2.149900928447852e-01},
    {8.079364608026202e-02, 2.103223087093422e-01},
    {2.840823320902124e-01, 1.945292086962893e-01},
    {4.667290485167077e-01, 1.693838059093582e-01},
    {6.204853512352519e-01, 1.371499151597280e-01},
    {7.394732321355052e-01, 1.002402801599464e-01},
    {8.201318720954396e-01, 6.080709508468810e-02},
    {8.607963163061316e-01, 2.070840476545303e-02},
    {8.727728136507039e-01, 1.253574079839078e-02},
    {8.916563772395616e-01, 2.397183723558556e-02},
    {9.192373372373420e-01, 3.021809354380292e-02},
    {9.500346715183706e-01, 3.027205199814611e-02},
    {9.775532683688947e-01, 2.368593568061651e-02},
    {9.954896691005256e-01, 1.141744473788874e-02},
  }},
  {{
    {-9.857595961761246e-01, 3.643931593123844e-02},
    {-9.258924858821892e-01, 8.273794370795576e-02},
    {-8.218833662202629e-01, 1.242680229936124e-01},
    {-6.797470718157004e-01, 1.586456191174843e-01},
    {-5.075733846631832e-01, 1.841025430283230e-01},
    {-3.148842536644393e-01, 1.995580161940930e-01},
    {-1.119089520342051e-01, 2.046841584582030e-01},
    {9.117593460489747e-02, 1.999093145144455e-01},
    {2.849772954295424e-01, 1.863566566231937e-01},
    {4.615244999958006e-01, 1.657233639623953e-01},
    {6.147619568252419e-01, 1.401105427713687e-01},
    {7.408522006801963e-01, 1.118164522164500e-01},
    {8.382582352569804e-01, 8.310260847601852e-02},
    {9.075765988474132e-01, 5.592493151946541e-02},
    {9.510630103726074e-01, 3.157199356768625e-02},
    {9.717169387169078e-01, 1.021414662954223e-02},
    {9.767801773920733e-01, 4.375212351185101e-03},
    {9.832812993252168e-01, 7.845621096866406e-03},
    {9.915520723139890e-01, 8.062764683328619e-03},
    {9.981629455677877e-01, 4.550772157144354e-03},
  }},
}};

const std::array<std::array<NodeWeight, 24>, 14> kNearby24{{
  {{
    {3.916216329415252e-02, 4.880755296918116e-02},
    {8.135233983530081e-02, 3.196002785163611e-02},
    {1.123448211344994e-01, 3.883416642507362e-02},
    {1.595931983965030e-01, 5.148898992140820e-02},
    {2.085759027831349e-01, 4.219328148763533e-02},
    {2.426241962027560e-01, 3.420686213633789e-02},
    {2.886190312538522e-01, 5.512488680719239e-02},
    {3.469021762354675e-01, 6.007112809843418e-02},
    {4.072910101569611e-01, 6.022350479415180e-02},
    {4.664019722595442e-01, 5.735022004401478e-02},
    {5.182120817844112e-01, 4.167923417118068e-02},
    {5.501308436771654e-01, 3.346089628879600e-02},
    {5.970302980854608e-01, 5.574716218423796e-02},
    {6.548457960388209e-01, 5.847838243344473e-02},
    {7.119542126106005e-01, 5.464156990092474e-02},
    {7.607920420946340e-01, 4.092186343704961e-02},
    {7.953017051155684e-01, 3.283728166050225e-02},
    {8.303900341517088e-01, 3.438233273473095e-02},
    {8.612724919009394e-01, 3.022585192226418e-02},
    {8.954049128027080e-01, 3.700769701277380e-02},
    {9.315909369155358e-01, 3.410213679365162e-02},
    {9.621742249068356e-01, 2.665791885274193e-02},
    {9.843663446380599e-01, 1.754420526360429e-02},
    {9.970087425823398e-01, 7.662283104388867e-03},
  }},
  {{
    {1.940564616937581e-02, 2.514022176052795e-02},
    {4.545433992382339e-02, 2.703526530535647e-02},
    {7.378866604396420e-02, 2.980872487617485e-02},
    {1.054147718077606e-01, 3.360626237885489e-02},
    {1.412997888401000e-01, 3.829678083416609e-02},
    {1.822325567811081e-01, 4.365651045780837e-02},
    {2.287282121202408e-01, 4.935846322319046e-02},
    {2.809170925514041e-01, 5.495967924055210e-02},
    {3.384320962237970e-01, 5.991162198705084e-02},
    {4.003108031244078e-01, 6.356960862248889e-02},
    {4.648605571606025e-01, 6.506868552467118e-02},
    {5.290714994276687e-01, 6.219588235225894e-02},
    {5.829663557386375e-01, 3.889986041695310e-02},
    {6.128301889979477e-01, 3.573431931940621e-02},
    {6.606072156240962e-01, 5.296315368353523e-02},
    {7.139495966128518e-01, 5.369033999927759e-02},
    {7.677830914961244e-01, 5.340793573367282e-02},
    {8.187382423336450e-01, 4.704756013998560e-02},
    {8.587068551739496e-01, 3.276576301747068e-02},
    {8.906873285570645e-01, 3.449175311880027e-02},
    {9.267772492129903e-01, 3.560168848238671e-02},
    {9.592137652582382e-01, 2.857367151127661e-02},
    {9.830962712794008e-01, 1.894042942442201e-02},
    {9.967621546194148e-01, 8.291994770212826e-03},
  }},
  {{
    {7.571097817272427e-03, 9.878088201321919e-03},
    {1.800655325976786e-02, 1.109316819462674e-02},
    {3.003901004577040e-02, 1.313311581321880e-02},
    {4.462882147989575e-02, 1.624262442061470e-02},
    {6.295732618092606e-02, 2.065168462990214e-02},
    {8.644035241970913e-02, 2.657795406825320e-02},
    {1.166164809306920e-01, 3.399052299072427e-02},
    {1.546690628394902e-01, 4.208214612865170e-02},
    {1.999554346680615e-01, 4.732516974042797e-02},
    {2.434683359132119e-01, 3.618419415803922e-02},
    {2.800846274146029e-01, 4.547346840583578e-02},
    {3.368595257878888e-01, 6.463153575242817e-02},
    {4.044418359833648e-01, 6.859104457897808e-02},
    {4.685002493634456e-01, 5.589917935916451e-02},
    {5.185062817085154e-01, 5.199232318335285e-02},
    {5.811314144990846e-01, 7.089840644422261e-02},
    {6.545700991450585e-01, 7.427400331494240e-02},
    {7.276588861478224e-01, 7.125308736931726e-02},
    {7.960626077582168e-01, 6.513697474660338e-02},
    {8.572037183403355e-01, 5.682298546820264e-02},
    {9.091330485015775e-01, 4.678000924507099e-02},
    {9.503131649503738e-01, 3.538488886617123e-02},
    {9.795718963793163e-01, 2.299723483013955e-02},
    {9.961006479199827e-01, 9.993597414733579e-03},
  }},
  {{
    {2.625961371586153e-03, 3.441901737135120e-03},
    {6.309383772392260e-03, 3.978799794732070e-03},
    {1.073246133489697e-02, 4.958449505644980e-03},
    {1.645170499644402e-02, 6.620822501994994e-03},
    {2.433800511777796e-02, 9.385496468197222e-03},
    {3.582530925992294e-02, 1.396512052439178e-02},
    {5.315827372101662e-02, 2.119383832447796e-02},
    {7.917327903614484e-02, 3.124989308824302e-02},
    {1.162053707416708e-01, 4.291481168916344e-02},
    {1.648139164451449e-01, 5.400832278279924e-02},
    {2.231934088488800e-01, 6.197424674301215e-02},
    {2.864519293820641e-01, 6.297221626131570e-02},
    {3.466729491189400e-01, 5.794981636764223e-02},
    {4.076175535528108e-01, 6.650501614478806e-02},
    {4.800964107543535e-01, 7.716379373230733e-02},
    {5.594105009204460e-01, 8.047814122759604e-02},
    {6.395390292352857e-01, 7.917822434973971e-02},
    {7.167410782176877e-01, 7.477646096014055e-02},
    {7.882807127957939e-01, 6.793424765652059e-02},
    {8.519356675821297e-01, 5.906852968947303e-02},
    {9.058606177202579e-01, 4.853108558910315e-02},
    {9.485539755760567e-01, 3.666228059710319e-02},
    {9.788566874094059e-01, 2.380850649522536e-02},
    {9.959649506960162e-01, 1.034186239262945e-02},
  }},
  {{
    {7.759451679242260e-04, 1.049591733965263e-03},
    {1.952854410117286e-03, 1.314968855711329e-03},
    {3.429053832116395e-03, 1.651475072547296e-03},
    {5.301128540262913e-03, 2.135645684467029e-03},
    {7.878118775220067e-03, 3.165043382856636e-03},
    {1.205537050949829e-02, 5.479528688655274e-03},
    {1.965871512055557e-02, 1.028817002915096e-02},
    {3.403328641997047e-02, 1.923291785614007e-02},
    {5.947430305925957e-02, 3.212643438782854e-02},
    {9.873500543531440e-02, 4.638626850049229e-02},
    {1.518862681939413e-01, 5.960676923068444e-02},
    {2.171724325134259e-01, 7.052360405410943e-02},
    {2.919941878735093e-01, 7.863451090237836e-02},
    {3.734637353255530e-01, 8.381771698595157e-02},
    {4.586710018443288e-01, 8.612755554083525e-02},
    {5.448057416999684e-01, 8.569938467103264e-02},
    {6.292158981939618e-01, 8.271051499695768e-02},
    {7.094415843889587e-01, 7.736692567834522e-02},
    {7.832417328632321e-01, 6.990012937760461e-02},
    {8.486194141302759e-01, 6.056687669667680e-02},
    {9.038469149367938e-01, 4.964868706783169e-02},
    {9.474898150194623e-01, 3.745026957972177e-02},
    {9.784290662963747e-01, 2.429741981889855e-02},
    {9.958843370550371e-01, 1.054906616108520e-02},
  }},
  {{
    {3.126377187332637e-04, 4.136479682893960e-04},
    {7.671264269072188e-04, 5.068714387414649e-04},
    {1.359575160544077e-03, 7.008932527842778e-04},
    {2.238313285727558e-03, 1.110264922990352e-03},
    {3.770276623583326e-03, 2.120108385941761e-03},
    {7.146583956092048e-03, 5.249076343206215e-03},
    {1.635515250548719e-02, 1.450809938905405e-02},
    {3.828062855101241e-02, 2.987724029376343e-02},
    {7.628984500206759e-02, 4.593298717863718e-02},
    {1.294255336121595e-01, 5.987634475538021e-02},
    {1.949876755761554e-01, 7.065953519392547e-02},
    {2.693852297828856e-01, 7.729918562776261e-02},
    {3.469762441631538e-01, 7.556635340171830e-02},
    {4.122748928895491e-01, 5.234123638339037e-02},
    {4.662499202239145e-01, 6.532130125393047e-02},
    {5.421402737123784e-01, 8.188272080198840e-02},
    {6.248832413655412e-01, 8.237354882288161e-02},
    {7.053258496784840e-01, 7.795795664563893e-02},
    {7.798841313231049e-01, 7.076514272025076e-02},
    {8.461534275163378e-01, 6.145788741452406e-02},
    {9.022312524979976e-01, 5.044339641339403e-02},
    {9.465899812310277e-01, 3.807817118430632e-02},
    {9.780549563823810e-01, 2.471549011101626e-02},
    {9.958125149101927e-01, 1.073289672726758e-02},
  }},
  {{
    {1.019234906342863e-04, 1.349775051746596e-04},
    {2.506087227631447e-04, 1.663411550150506e-04},
    {4.461429005344285e-04, 2.328782111562424e-04},
    {7.422845421202523e-04, 3.804721779784063e-04},
    {1.289196091156456e-03, 7.930350452911450e-04},
    {2.739287668024851e-03, 2.600694722423854e-03},
    {9.075168969969708e-03, 1.212249113599252e-02},
    {2.968005234555358e-02, 2.946708975720586e-02},
    {6.781742979962609e-02, 4.647771960691390e-02},
    {1.217792474402805e-01, 6.095376889009233e-02},
    {1.886625378438471e-01, 7.224844725827559e-02},
    {2.650602155844836e-01, 7.986429603884565e-02},
    {3.465113608339080e-01, 8.143206462900546e-02},
    {4.178374197420536e-01, 5.040529357007135e-02},
    {4.597624982511183e-01, 5.592137651001418e-02},
    {5.348065111487157e-01, 8.398073572656715e-02},
    {6.194640153146728e-01, 8.402586870225486e-02},
    {7.013481004172354e-01, 7.922223490159952e-02},
    {7.770386175609082e-01, 7.177919251691964e-02},
    {8.442211768916794e-01, 6.227551999401272e-02},
    {9.010272836291835e-01, 5.108407212719758e-02},
    {9.459409782755001e-01, 3.854783279333592e-02},
    {9.777905486554876e-01, 2.501496650831813e-02},
    {9.957622871041650e-01, 1.086176801402067e-02},
  }},
  {{
    {3.421721832247593e-05, 4.559730842497453e-05},
    {8.533906255442380e-05, 5.840391255974745e-05},
    {1.563524616155011e-04, 8.761580900682040e-05},
    {2.746612401575526e-04, 1.617264666294872e-04},
    {5.408643931265062e-04, 4.433543035169213e-04},
    {1.782382096488333e-03, 3.116175111368442e-03},
    {1.101243912052365e-02, 1.655494413772595e-02},
    {3.553172024884285e-02, 3.242539256461602e-02},
    {7.554170435463801e-02, 4.734426463929677e-02},
    {1.295711894941649e-01, 6.032614603579952e-02},
    {1.953213037793089e-01, 7.069975187373848e-02},
    {2.699680545714222e-01, 7.806973621204365e-02},
    {3.503697281371090e-01, 8.216350598137868e-02},
    {4.330838596494367e-01, 8.261286657092808e-02},
    {5.141801680435878e-01, 7.883476216668445e-02},
    {5.895097016206093e-01, 7.157205125318401e-02},
    {6.582708672338614e-01, 6.703064468754417e-02},
    {7.252543617887320e-01, 6.706137273719630e-02},
    {7.914154485613720e-01, 6.449984116349734e-02},
    {8.528383935857844e-01, 5.775434959088197e-02},
    {9.059696536862878e-01, 4.812600239023880e-02},
    {9.484664124578303e-01, 3.661415869304224e-02},
    {9.787863313133854e-01, 2.386304203446463e-02},
    {9.959482975155097e-01, 1.038268695581411e-02},
  }},
  {{
    {6.538987938840374e-06, 1.500332421093607e-05},
    {2.613485075847413e-05, 2.367234654253158e-05},
    {5.664183720634991e-05, 4.007286246706405e-05},
    {1.179374114362569e-04, 9.497743501485505e-05},
    {3.299119431334128e-04, 4.619067037944727e-04},
    {3.626828607577001e-03, 9.985382463808036e-03},
    {2.265102906572155e-02, 2.805741744607257e-02},
    {5.896796231680340e-02, 4.404106103008398e-02},
    {1.092496277855923e-01, 5.548413172821072e-02},
    {1.666701689499393e-01, 5.693235996372726e-02},
    {2.196889385898800e-01, 5.087307376046002e-02},
    {2.770352260035617e-01, 6.593729718379782e-02},
    {3.483163928268329e-01, 7.335680008972614e-02},
    {4.153287664837260e-01, 5.675029500743735e-02},
    {4.695624219668608e-01, 6.117926027541254e-02},
    {5.421129318998841e-01, 8.004805067067550e-02},
    {6.238832212055707e-01, 8.196991767042605e-02},
    {7.041842972237081e-01, 7.800219127200407e-02},
    {7.788817007552110e-01, 7.097175077519494e-02},
    {8.453877637047045e-01, 6.171193295041172e-02},
    {9.017178251963006e-01, 5.068671319716005e-02},
    {9.462999385952402e-01, 3.827738423897266e-02},
    {9.779333485180249e-01, 2.485063762733620e-02},
    {9.957890687155009e-01, 1.079284973329516e-02},
  }},
  {{
    {6.725520559705825e-06, 8.128391913974039e-05},
    {6.986424152770461e-06, -7.773900735768282e-05},
    {1.217363416714366e-05, 1.287386499666193e-05},
    {2.677746219601529e-05, 1.895577251914526e-05},
    {5.597036348896741e-05, 4.732580352158076e-05},
    {2.729343280943077e-04, 9.857909615386162e-04},
    {9.445526806263141e-03, 1.756872897270054e-02},
    {3.556725025161542e-02, 3.439422017906772e-02},
    {7.765556668177810e-02, 4.944188361792970e-02},
    {1.336848150648662e-01, 6.219733934997792e-02},
    {2.011576917683550e-01, 7.228007436918939e-02},
    {2.772736854314979e-01, 7.944986391225688e-02},
    {3.590124362607926e-01, 8.347646288178011e-02},
    {4.430074035214462e-01, 8.380433020121207e-02},
    {5.247388219574510e-01, 7.832768209682506e-02},
    {5.961053238782420e-01, 6.300796225242940e-02},
    {6.547331131213409e-01, 5.923406014585053e-02},
    {7.192258519628951e-01, 6.834293563803810e-02},
    {7.874251789073102e-01, 6.660337204499726e-02},
    {8.505852012775045e-01, 5.911988751082552e-02},
    {9.047824617894323e-01, 4.893575310568894e-02},
    {9.479045131744448e-01, 3.708256438629509e-02},
    {9.785770588866582e-01, 2.411463784693618e-02},
    {9.959104692340199e-01, 1.048087156697020e-02},
  }},
  {{
    {2.828736694877886e-08, 1.665602686704325e-05},
    {2.302233157554212e-06, 2.577419924039251e-06},
    {5.853587143444178e-06, 4.957941112780975e-06},
    {1.451588770083244e-05, 1.537074702915107e-05},
    {9.711965099273031e-05, 4.640075239797995e-04},
    {9.004761967373848e-03, 1.705687938176189e-02},
    {3.442077924035546e-02, 3.349724914160473e-02},
    {7.543926781582543e-02, 4.820210872119093e-02},
    {1.300373356318913e-01, 6.054547286337976e-02},
    {1.955182772803384e-01, 6.984354388121057e-02},
    {2.683608546664295e-01, 7.498721497014774e-02},
    {3.430029178740901e-01, 7.240620145057083e-02},
    {4.085056107803621e-01, 5.774925310174693e-02},
    {4.660198270439085e-01, 6.238505554837956e-02},
    {5.336124745634699e-01, 6.940394677081842e-02},
    {5.985245800106473e-01, 5.910843483407385e-02},
    {6.564089719608276e-01, 6.059752321454190e-02},
    {7.216666024232565e-01, 6.823362237770209e-02},
    {7.893712241343741e-01, 6.593839664071163e-02},
    {8.518883782001418e-01, 5.853014420243146e-02},
    {9.055688088881344e-01, 4.849217100974983e-02},
    {9.483163097840529e-01, 3.677417821170115e-02},
    {9.787413692715607e-01, 2.392585642844202e-02},
    {9.959413203611228e-01, 1.040149939671874e-02},
  }},
  {{
    {6.147063879573664e-07, 8.763741095000331e-07},
    {2.102921984985835e-06, 1.784696796288373e-05},
    {2.188366117432289e-06, -1.795398395983826e-05},
    {3.482602942694880e-06, 5.117514567175025e-06},
    {2.768001888608636e-05, 1.698863549284390e-04},
    {8.942779215792784e-03, 1.701975216672032e-02},
    {3.432218364237253e-02, 3.346025972593909e-02},
    {7.530931328026620e-02, 4.817949622196712e-02},
    {1.298983048592572e-01, 6.055152664710045e-02},
    {1.954020797117703e-01, 6.988313730886592e-02},
    {2.682970870436427e-01, 7.504602275463067e-02},
    {3.429540704041702e-01, 7.230942674874111e-02},
    {4.080399755202422e-01, 5.705952259766429e-02},
    {4.652562798154792e-01, 6.265021180818162e-02},
    {5.333220999210325e-01, 6.993669694523695e-02},
    {5.986982369433125e-01, 5.937130986945129e-02},
    {6.564773600603511e-01, 6.026572020863567e-02},
    {7.215159032030418e-01, 6.815292696374753e-02},
    {7.892098210760941e-01, 6.596804590657802e-02},
    {8.517672777806986e-01, 5.857483758149194e-02},
    {9.054906995605498e-01, 4.853209199396977e-02},
    {9.482736017320823e-01, 3.680469214176019e-02},
    {9.787238593479314e-01, 2.394561701705853e-02},
    {9.959379852805677e-01, 1.041005152890511e-02},
  }},
  {{
    {4.523740015216508e-08, 4.418138082366788e-07},
    {4.281855233588279e-07, 4.389108058643120e-07},
    {1.036900153156159e-06, 9.539585150737866e-07},
    {7.825849325746907e-06, 5.823980947200484e-05},
    {8.617419723953112e-03, 1.634464263521301e-02},
    {3.268881163637599e-02, 3.129682188728318e-02},
    {6.988441391437043e-02, 4.212468617589480e-02},
    {1.142202307676442e-01, 4.505120897719191e-02},
    {1.596471081833281e-01, 4.769069780026684e-02},
    {2.135336418959620e-01, 6.038503382768951e-02},
    {2.781100275296151e-01, 6.695343672694180e-02},
    {3.433392803364457e-01, 6.163298712826237e-02},
    {4.019960595528027e-01, 5.877742624357513e-02},
    {4.656415679416787e-01, 6.800053637773440e-02},
    {5.334880548894250e-01, 6.516918103589647e-02},
    {5.943298528903542e-01, 5.853785375926075e-02},
    {6.562968737815924e-01, 6.639396325654251e-02},
    {7.250343344601498e-01, 6.948738324081696e-02},
    {7.928820737781136e-01, 6.538801703374268e-02},
    {8.546103048745466e-01, 5.761503751629250e-02},
    {9.073762310762705e-01, 4.761344859555310e-02},
    {9.493253659835347e-01, 3.607033097268266e-02},
    {9.791606801267259e-01, 2.345690720840071e-02},
    {9.960217573957566e-01, 1.019557402722854e-02},
  }},
  {{
    {6.025980282801020e-08, 9.079353616441234e-07},
    {6.411245262925473e-08, -8.390389042773805e-07},
    {1.862815529429129e-07, 2.782460677485016e-07},
    {2.029190208906422e-06, 1.821115881362725e-05},
    {8.902881307076499e-03, 1.695809650660321e-02},
    {3.420089035164912e-02, 3.336370146025145e-02},
    {7.508687525931594e-02, 4.807898681796971e-02},
    {1.295858123029775e-01, 6.047672723211479e-02},
    {1.950409815188335e-01, 6.986774906175534e-02},
    {2.679751967812604e-01, 7.515608233194288e-02},
    {3.428525062164689e-01, 7.264249904037610e-02},
    {4.080941369413548e-01, 5.672507168477261e-02},
    {4.646644511900009e-01, 6.220316364524964e-02},
    {5.328071517215501e-01, 7.032362652293805e-02},
    {5.978508749698001e-01, 5.742730804758014e-02},
    {6.521214523350964e-01, 5.644075454541152e-02},
    {7.134921670665336e-01, 6.318643666150391e-02},
    {7.679317896479284e-01, 3.945995610428228e-02},
    {8.029718487208403e-01, 4.324200884758527e-02},
    {8.551101435866935e-01, 5.478223695609097e-02},
    {9.067319102017767e-01, 4.740856250832772e-02},
    {9.487765213293372e-01, 3.633314063504751e-02},
    {9.788979796532736e-01, 2.372788917088821e-02},
    {9.959684838634199e-01, 1.033036588606145e-02},
  }},
}};

}  // namespace axibie::tables
